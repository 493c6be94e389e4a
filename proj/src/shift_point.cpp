#include "mixkit/shift_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mixkit/errors.hpp"

namespace mixkit {
namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

ShiftPoint::ShiftPoint(Word left_tail, Word core, Word right_tail, std::int64_t begin)
    : left_(std::move(left_tail)), core_(std::move(core)), right_(std::move(right_tail)), begin_(begin) {
  if (left_.empty() || right_.empty()) throw InvalidInput("shift point: periodic tails must be non-empty");
}

ShiftPoint ShiftPoint::periodic(std::span<const Symbol> word) {
  Word w(word.begin(), word.end());
  return ShiftPoint(w, {}, w, 0);
}

Symbol ShiftPoint::at(std::int64_t i) const noexcept {
  if (i < begin_) {
    // Left tail is anchored so that its last symbol sits at begin - 1.
    const auto len = static_cast<std::int64_t>(left_.size());
    return left_[static_cast<std::size_t>(floor_mod(i - begin_, len))];
  }
  if (i < end()) return core_[static_cast<std::size_t>(i - begin_)];
  const auto len = static_cast<std::int64_t>(right_.size());
  return right_[static_cast<std::size_t>(floor_mod(i - end(), len))];
}

Word ShiftPoint::window(std::int64_t first, std::size_t length) const {
  Word out(length);
  for (std::size_t k = 0; k < length; ++k) out[k] = at(first + static_cast<std::int64_t>(k));
  return out;
}

ShiftPoint ShiftPoint::shifted(std::int64_t k) const {
  ShiftPoint out = *this;
  out.begin_ -= k;
  return out;
}

std::int64_t agreement_radius(const ShiftPoint& x, const ShiftPoint& y) {
  // Beyond `bound` both sequences are periodic on each side; agreement over a
  // stretch of length p + q there forces agreement forever.
  const auto tails = static_cast<std::int64_t>(x.left_tail().size() + y.left_tail().size() +
                                               x.right_tail().size() + y.right_tail().size());
  const std::int64_t bound = std::max({std::llabs(x.begin()), std::llabs(x.end()), std::llabs(y.begin()),
                                       std::llabs(y.end())}) +
                             tails + 1;
  for (std::int64_t k = 0; k <= bound; ++k) {
    if (x.at(k) != y.at(k) || x.at(-k) != y.at(-k)) return k;
  }
  return -1;
}

double shift_distance(const ShiftPoint& x, const ShiftPoint& y) {
  const std::int64_t k = agreement_radius(x, y);
  return k < 0 ? 0.0 : std::ldexp(1.0, static_cast<int>(-k));
}

}  // namespace mixkit
