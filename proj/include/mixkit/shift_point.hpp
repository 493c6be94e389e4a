#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mixkit/sft.hpp"

namespace mixkit {

/// Eventually periodic bi-infinite sequence: a left periodic tail, a finite
/// core occupying coordinates [begin, begin + |core|), and a right periodic
/// tail. Every point the library produces (periodic points, homoclinic points
/// and their shifts) has this form, so distances are computed exactly.
class ShiftPoint {
 public:
  ShiftPoint() = default;
  ShiftPoint(Word left_tail, Word core, Word right_tail, std::int64_t begin);

  /// The periodic point w^inf with w occupying coordinates 0..|w|-1.
  static ShiftPoint periodic(std::span<const Symbol> word);

  Symbol at(std::int64_t i) const noexcept;
  /// Coordinates first..first+length-1.
  Word window(std::int64_t first, std::size_t length) const;
  /// sigma^k: (sigma^k x)_i = x_{i+k}.
  ShiftPoint shifted(std::int64_t k) const;

  const Word& left_tail() const noexcept { return left_; }
  const Word& core() const noexcept { return core_; }
  const Word& right_tail() const noexcept { return right_; }
  std::int64_t begin() const noexcept { return begin_; }
  std::int64_t end() const noexcept { return begin_ + static_cast<std::int64_t>(core_.size()); }

 private:
  Word left_;
  Word core_;
  Word right_;
  std::int64_t begin_ = 0;
};

/// Largest k with x_i = y_i for all |i| < k, or -1 when x == y.
std::int64_t agreement_radius(const ShiftPoint& x, const ShiftPoint& y);

/// d(x, y) = 2^-k with k = agreement_radius(x, y); 0 when x == y.
double shift_distance(const ShiftPoint& x, const ShiftPoint& y);

}  // namespace mixkit
