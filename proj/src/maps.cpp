#include "mixkit/maps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "mixkit/errors.hpp"
#include "mixkit/lpp.hpp"

namespace mixkit {
namespace {

using i128 = __int128;

std::int64_t narrow(i128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw OverflowError(std::string(what) + ": value exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

IntMatrix2 multiply(const IntMatrix2& x, const IntMatrix2& y) {
  IntMatrix2 z{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      z[i][j] = narrow(static_cast<i128>(x[i][0]) * y[0][j] + static_cast<i128>(x[i][1]) * y[1][j], "matrix power");
  return z;
}

std::int64_t floor_mod(i128 a, std::int64_t m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

double frac(double v) noexcept {
  const double f = v - std::floor(v);
  return f >= 1.0 ? 0.0 : f;
}

Vec2 normalized(double x, double y) {
  const double n = std::hypot(x, y);
  return {x / n, y / n};
}

RationalPoint reduce(std::int64_t x, std::int64_t y, std::int64_t den) {
  const std::int64_t g = std::gcd(std::gcd(x, y), den);
  return {x / g, y / g, den / g};
}

bool less_by_value(const RationalPoint& a, const RationalPoint& b) {
  const i128 ax = static_cast<i128>(a.x) * b.den, bx = static_cast<i128>(b.x) * a.den;
  if (ax != bx) return ax < bx;
  return static_cast<i128>(a.y) * b.den < static_cast<i128>(b.y) * a.den;
}

// Smith form of a nonsingular 2x2 integer matrix M: column operations R and
// row operations L with L M R = diag(d1, d2), d1 | d2, d1, d2 > 0. Only R is
// needed, because M^{-1} Z^2 = R diag(1/d1, 1/d2) Z^2.
struct Smith {
  i128 d1 = 0, d2 = 0;
  i128 r[2][2] = {{1, 0}, {0, 1}};
};

Smith smith_form(const IntMatrix2& mat) {
  Smith s;
  i128 m[2][2] = {{mat[0][0], mat[0][1]}, {mat[1][0], mat[1][1]}};
  auto swap_cols = [&] {
    for (int i = 0; i < 2; ++i) {
      std::swap(m[i][0], m[i][1]);
      std::swap(s.r[i][0], s.r[i][1]);
    }
  };
  auto abs128 = [](i128 v) { return v < 0 ? -v : v; };
  for (;;) {
    // Bring the smallest nonzero entry to (0, 0).
    int bi = -1, bj = -1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (m[i][j] != 0 && (bi < 0 || abs128(m[i][j]) < abs128(m[bi][bj]))) {
          bi = i;
          bj = j;
        }
    if (bi < 0) throw InvalidInput("singular matrix in lattice solve");
    if (bi == 1) std::swap(m[0], m[1]);
    if (bj == 1) swap_cols();
    const i128 qr = m[1][0] / m[0][0];
    m[1][0] -= qr * m[0][0];
    m[1][1] -= qr * m[0][1];
    const i128 qc = m[0][1] / m[0][0];
    m[0][1] -= qc * m[0][0];
    m[1][1] -= qc * m[1][0];
    s.r[0][1] -= qc * s.r[0][0];
    s.r[1][1] -= qc * s.r[1][0];
    if (m[1][0] != 0 || m[0][1] != 0) continue;
    if (m[1][1] == 0) throw InvalidInput("singular matrix in lattice solve");
    if (m[1][1] % m[0][0] != 0) {
      m[0][1] += m[1][1];  // row 0 += row 1
      continue;
    }
    break;
  }
  for (int c = 0; c < 2; ++c) {
    const i128 d = m[c][c];
    if (d < 0) {
      m[c][c] = -d;
      s.r[0][c] = -s.r[0][c];
      s.r[1][c] = -s.r[1][c];
    }
  }
  s.d1 = m[0][0];
  s.d2 = m[1][1];
  return s;
}

struct LatticePlan {
  std::int64_t d1 = 0, d2 = 0;
  std::int64_t r[2][2] = {};  // R reduced mod d2
};

LatticePlan lattice_plan(const ToralAutomorphism& f, std::uint64_t n, std::uint64_t cap) {
  const std::uint64_t count = toral_fixed_point_count(f, n);
  if (count > cap)
    throw PreconditionError("|Fix(f^" + std::to_string(n) + ")| = " + std::to_string(count) + " exceeds the cap " +
                            std::to_string(cap));
  IntMatrix2 m = f.power(n);
  m[0][0] = narrow(static_cast<i128>(m[0][0]) - 1, "A^n - I");
  m[1][1] = narrow(static_cast<i128>(m[1][1]) - 1, "A^n - I");
  const Smith s = smith_form(m);
  LatticePlan plan;
  plan.d1 = static_cast<std::int64_t>(s.d1);
  plan.d2 = static_cast<std::int64_t>(s.d2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) plan.r[i][j] = floor_mod(s.r[i][j], plan.d2);
  return plan;
}

RationalPoint lattice_point(const LatticePlan& plan, std::int64_t index) {
  const std::int64_t i = index / plan.d2, j = index % plan.d2;
  const i128 u = static_cast<i128>(i) * (plan.d2 / plan.d1), v = j;
  const std::int64_t x = floor_mod(plan.r[0][0] * u + plan.r[0][1] * v, plan.d2);
  const std::int64_t y = floor_mod(plan.r[1][0] * u + plan.r[1][1] * v, plan.d2);
  return reduce(x, y, plan.d2);
}

}  // namespace

Vec2 wrap(Vec2 p) noexcept { return {frac(p.x), frac(p.y)}; }

double torus_distance(Vec2 a, Vec2 b) noexcept {
  double dx = std::abs(frac(a.x) - frac(b.x));
  double dy = std::abs(frac(a.y) - frac(b.y));
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return std::hypot(dx, dy);
}

double Hyperbolicity::shadowing_constant() const noexcept {
  return std::max(1.0 / (1.0 - mu_s), 1.0 / (1.0 - 1.0 / mu_u)) * splitting_factor;
}

ToralAutomorphism::ToralAutomorphism(const IntMatrix2& a) : a_(a) {
  const double tr = static_cast<double>(a[0][0] + a[1][1]);
  const i128 det = static_cast<i128>(a[0][0]) * a[1][1] - static_cast<i128>(a[0][1]) * a[1][0];
  if (det != 1 && det != -1) throw InvalidInput("toral automorphism needs det = +-1");
  const double disc = tr * tr - 4.0 * static_cast<double>(det);
  if (disc <= 0.0 || (det == 1 && std::abs(tr) <= 2.0) || (det == -1 && tr == 0.0))
    throw InvalidInput("toral automorphism is not hyperbolic");
  const double root = std::sqrt(disc);
  const double big = tr >= 0 ? (tr + root) / 2 : (tr - root) / 2;
  lambda_u_ = big;
  lambda_s_ = static_cast<double>(det) / big;
  auto eigvec = [&](double lam) {
    const double b = static_cast<double>(a[0][1]), c = static_cast<double>(a[1][0]);
    if (b != 0.0) return normalized(b, lam - static_cast<double>(a[0][0]));
    if (c != 0.0) return normalized(lam - static_cast<double>(a[1][1]), c);
    return lam == static_cast<double>(a[0][0]) ? Vec2{1, 0} : Vec2{0, 1};
  };
  v_u_ = eigvec(lambda_u_);
  v_s_ = eigvec(lambda_s_);
}

Vec2 ToralAutomorphism::apply_linear(Vec2 v) const noexcept {
  return {static_cast<double>(a_[0][0]) * v.x + static_cast<double>(a_[0][1]) * v.y,
          static_cast<double>(a_[1][0]) * v.x + static_cast<double>(a_[1][1]) * v.y};
}

Vec2 ToralAutomorphism::evaluate(Vec2 p) const noexcept { return wrap(apply_linear(p)); }

std::array<std::array<double, 2>, 2> ToralAutomorphism::differential() const noexcept {
  return {{{static_cast<double>(a_[0][0]), static_cast<double>(a_[0][1])},
           {static_cast<double>(a_[1][0]), static_cast<double>(a_[1][1])}}};
}

std::array<double, 2> ToralAutomorphism::split(Vec2 v) const noexcept {
  const double det = v_u_.x * v_s_.y - v_s_.x * v_u_.y;
  return {(v.x * v_s_.y - v_s_.x * v.y) / det, (v_u_.x * v.y - v.x * v_u_.y) / det};
}

Hyperbolicity ToralAutomorphism::hyperbolicity() const noexcept {
  Hyperbolicity h;
  h.mu_s = std::abs(lambda_s_);
  h.mu_u = std::abs(lambda_u_);
  const double cosine = v_u_.x * v_s_.x + v_u_.y * v_s_.y;
  const double sine = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
  h.splitting_factor = std::abs(cosine) < 1e-12 ? std::sqrt(2.0) : 2.0 / sine;
  return h;
}

IntMatrix2 ToralAutomorphism::power(std::uint64_t n) const {
  IntMatrix2 acc{{{1, 0}, {0, 1}}}, base = a_;
  while (n > 0) {
    if (n & 1U) acc = multiply(acc, base);
    n >>= 1U;
    if (n > 0) base = multiply(base, base);
  }
  return acc;
}

RationalPoint ToralAutomorphism::evaluate_exact(const RationalPoint& p) const {
  const std::int64_t x = floor_mod(static_cast<i128>(a_[0][0]) * p.x + static_cast<i128>(a_[0][1]) * p.y, p.den);
  const std::int64_t y = floor_mod(static_cast<i128>(a_[1][0]) * p.x + static_cast<i128>(a_[1][1]) * p.y, p.den);
  return {x, y, p.den};
}

std::uint64_t toral_fixed_point_count(const ToralAutomorphism& f, std::uint64_t n) {
  const IntMatrix2 an = f.power(n);
  const auto& a = f.matrix();
  const i128 det = static_cast<i128>(a[0][0]) * a[1][1] - static_cast<i128>(a[0][1]) * a[1][0];
  const i128 det_n = (det == -1 && (n & 1U)) ? -1 : 1;
  i128 v = det_n - (static_cast<i128>(an[0][0]) + an[1][1]) + 1;
  if (v < 0) v = -v;
  return static_cast<std::uint64_t>(narrow(v, "fixed point count"));
}

std::vector<RationalPoint> toral_fixed_points(const ToralAutomorphism& f, std::uint64_t n, std::uint64_t cap) {
  const LatticePlan plan = lattice_plan(f, n, cap);
  const std::int64_t total = plan.d1 * plan.d2;
  std::vector<RationalPoint> out(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < total; ++k) out[static_cast<std::size_t>(k)] = lattice_point(plan, k);
  std::sort(out.begin(), out.end(), less_by_value);
  return out;
}

std::vector<RationalPoint> toral_fixed_points_serial(const ToralAutomorphism& f, std::uint64_t n,
                                                     std::uint64_t cap) {
  const LatticePlan plan = lattice_plan(f, n, cap);
  std::vector<RationalPoint> out;
  out.reserve(static_cast<std::size_t>(plan.d1 * plan.d2));
  for (std::int64_t k = 0; k < plan.d1 * plan.d2; ++k) out.push_back(lattice_point(plan, k));
  std::sort(out.begin(), out.end(), less_by_value);
  return out;
}

std::vector<std::vector<RationalPoint>> toral_orbits(const ToralAutomorphism& f, std::uint64_t n,
                                                     std::uint64_t cap) {
  const auto points = toral_fixed_points(f, n, cap);
  std::vector<char> used(points.size(), 0);
  auto index_of = [&](const RationalPoint& p) {
    const auto it = std::lower_bound(points.begin(), points.end(), p, less_by_value);
    return static_cast<std::size_t>(it - points.begin());
  };
  std::vector<std::vector<RationalPoint>> orbits;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (used[i]) continue;
    std::vector<RationalPoint> orbit;
    RationalPoint p = points[i];
    do {
      used[index_of(p)] = 1;
      orbit.push_back(p);
      p = f.evaluate_exact(p);
    } while (!(p == points[i]));
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

Horseshoe::Horseshoe(double contraction, double expansion) : c_(contraction), e_(expansion) {
  if (!(c_ > 0.0 && c_ < 0.5 && e_ > 2.0))
    throw InvalidInput("horseshoe rates must satisfy 0 < contraction < 1/2 and expansion > 2");
}

std::optional<int> Horseshoe::branch(Vec2 p) const noexcept {
  if (p.x < 0.0 || p.x > 1.0) return std::nullopt;
  if (p.y >= 0.0 && p.y <= 1.0 / e_) return 0;
  if (p.y >= 1.0 - 1.0 / e_ && p.y <= 1.0) return 1;
  return std::nullopt;
}

Vec2 Horseshoe::apply_branch(int b, Vec2 p) const noexcept {
  if (b == 0) return {c_ * p.x, e_ * p.y};
  return {1.0 - c_ + c_ * p.x, e_ * p.y - e_ + 1.0};
}

Vec2 Horseshoe::evaluate(Vec2 p) const noexcept {
  const auto b = branch(p);
  return apply_branch(b ? *b : (p.y < 0.5 ? 0 : 1), p);
}

double Horseshoe::distance(Vec2 a, Vec2 b) const noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

std::array<std::array<double, 2>, 2> Horseshoe::differential() const noexcept { return {{{c_, 0.0}, {0.0, e_}}}; }

Hyperbolicity Horseshoe::hyperbolicity() const noexcept {
  Hyperbolicity h;
  h.mu_s = c_;
  h.mu_u = e_;
  h.splitting_factor = std::sqrt(2.0);
  return h;
}

Vec2 Horseshoe::periodic_point(std::span<const Symbol> word) const {
  if (word.empty()) throw InvalidInput("empty itinerary");
  // x: fixed point of the forward composition (contracting in x).
  double x = 0.0;
  for (Symbol b : word) x = c_ * x + (b ? 1.0 - c_ : 0.0);
  const double cn = std::pow(c_, static_cast<double>(word.size()));
  x /= 1.0 - cn;
  // y: fixed point of the inverse branches applied in reverse (contracting in y).
  double y = 0.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) y = *it ? (y + e_ - 1.0) / e_ : y / e_;
  const double en = std::pow(e_, -static_cast<double>(word.size()));
  y /= 1.0 - en;
  return {x, y};
}

std::optional<Word> Horseshoe::itinerary(Vec2 p, std::size_t length) const {
  Word out;
  for (std::size_t k = 0; k < length; ++k) {
    const auto b = branch(p);
    if (!b) return std::nullopt;
    out.push_back(static_cast<Symbol>(*b));
    p = apply_branch(*b, p);
  }
  return out;
}

std::vector<CodingEntry> coding_table(const Horseshoe& h, std::size_t depth) {
  if (depth == 0 || depth > 20) throw InvalidInput("coding depth must lie in [1, 20]");
  std::vector<CodingEntry> table;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << depth); ++bits) {
    Word w(depth);
    for (std::size_t k = 0; k < depth; ++k) w[k] = static_cast<Symbol>((bits >> (depth - 1 - k)) & 1U);
    table.push_back({w, h.periodic_point(w)});
  }
  return table;
}

Vec2 ToralHomoclinic::point(const ToralAutomorphism& f, std::int64_t j) const {
  const auto tau = static_cast<std::int64_t>(orbit.size());
  if (j >= 0) {
    const Vec2 base = orbit[static_cast<std::size_t>(j % tau)].value();
    const double c = t * std::pow(f.lambda_s(), static_cast<double>(j));
    const Vec2 v = f.stable_direction();
    return wrap({base.x + c * v.x, base.y + c * v.y});
  }
  const Vec2 base = orbit[static_cast<std::size_t>(((j + 1) % tau + tau) % tau)].value();
  const double c = s * std::pow(f.lambda_u(), static_cast<double>(j));
  const Vec2 v = f.unstable_direction();
  return wrap({base.x + c * v.x, base.y + c * v.y});
}

ToralHomoclinic toral_homoclinic_point(const ToralAutomorphism& f, std::vector<RationalPoint> orbit,
                                       std::int64_t radius) {
  if (orbit.empty()) throw InvalidInput("empty periodic orbit");
  for (std::size_t k = 0; k < orbit.size(); ++k)
    if (!(f.evaluate_exact(orbit[k]) == orbit[(k + 1) % orbit.size()]))
      throw InvalidInput("points do not form a periodic orbit");
  ToralHomoclinic best;
  best.orbit = orbit;
  best.radius = radius;
  double best_size = std::numeric_limits<double>::infinity();
  const Vec2 p = orbit[0].value();
  const Vec2 fp = orbit[1 % orbit.size()].value();
  const Vec2 vs = f.stable_direction(), vu = f.unstable_direction();
  // p + t vs = f(p) + s vu + k  <=>  t vs - s vu = f(p) - p + k
  const double det = vs.x * (-vu.y) - (-vu.x) * vs.y;
  for (std::int64_t kx = -radius; kx <= radius; ++kx) {
    for (std::int64_t ky = -radius; ky <= radius; ++ky) {
      const double rx = fp.x - p.x + static_cast<double>(kx), ry = fp.y - p.y + static_cast<double>(ky);
      const double t = (rx * (-vu.y) - (-vu.x) * ry) / det;
      const double s = (vs.x * ry - rx * vs.y) / det;
      const double size = std::abs(t) + std::abs(s);
      if (size < 1e-12) continue;
      if (size < best_size - 1e-12) {
        best_size = size;
        best.t = t;
        best.s = s;
        best.deck = {kx, ky};
      }
    }
  }
  if (!std::isfinite(best_size))
    throw PreconditionError("no homoclinic intersection among deck translates with |k| <= " + std::to_string(radius));
  return best;
}

SymbolicHomoclinic symbolic_homoclinic_point(const TransitionMatrix& a, std::span<const Symbol> p) {
  if (p.empty() || !a.admissible_cyclic(p)) throw InvalidInput("periodic word is not an admissible cycle");
  if (sft::primitive_period(p) != p.size()) throw InvalidInput("periodic word must be primitive");
  const std::size_t tau = p.size();
  // Lexicographically least walk p0 -> ... -> p[L mod tau] with L + 1 steps;
  // for a fixed point the interior must leave p.
  const std::size_t max_len = 2 * a.size() + tau + 1;
  for (std::size_t len = 0; len <= max_len; ++len) {
    const Symbol target = p[len % tau];
    std::optional<Word> found;
    Word walk{p[0]};
    std::function<void()> dfs = [&] {
      if (found) return;
      const std::size_t steps = walk.size() - 1;
      if (steps == len) {
        if (!a(walk.back(), target)) return;
        const Word interior(walk.begin() + 1, walk.end());
        const bool trivial = tau == 1 && std::ranges::all_of(interior, [&](Symbol s) { return s == p[0]; });
        if (!trivial) found = interior;
        return;
      }
      std::uint64_t next = a.successors(walk.back());
      while (next != 0 && !found) {
        const auto s = static_cast<Symbol>(std::countr_zero(next));
        next &= next - 1;
        if (!sft::walk_of_length(a, s, target, len - steps)) continue;
        walk.push_back(s);
        dfs();
        walk.pop_back();
      }
    };
    dfs();
    if (!found) continue;
    SymbolicHomoclinic h;
    h.p.assign(p.begin(), p.end());
    h.splice = *found;
    const std::size_t shift = len % tau;
    Word left, right;
    for (std::size_t k = 0; k < tau; ++k) {
      left.push_back(p[(k + 1) % tau]);
      right.push_back(p[(shift + k) % tau]);
    }
    h.q = ShiftPoint(left, h.splice, right, 0);
    h.excursion.push_back(p[0]);
    h.excursion.insert(h.excursion.end(), h.splice.begin(), h.splice.end());
    if (shift != 0)
      for (std::size_t k = shift; k < tau; ++k) h.excursion.push_back(p[k]);
    return h;
  }
  throw PreconditionError("no homoclinic splice found for the periodic word");
}

LyapunovReport lyapunov_exponents_periodic(const ToralAutomorphism& f, std::size_t period) {
  if (period == 0) throw InvalidInput("period must be positive");
  return {{std::log(std::abs(f.lambda_u())), std::log(std::abs(f.lambda_s()))}, true, ""};
}

LyapunovReport lyapunov_exponents_periodic(const Horseshoe& h, std::span<const Symbol> itinerary) {
  if (itinerary.empty()) throw InvalidInput("empty itinerary");
  return {{std::log(h.expansion()), std::log(h.contraction())}, true, ""};
}

LyapunovReport lyapunov_exponents_periodic(const ShiftSystem&, std::size_t) {
  return {{}, false, "shift space has no differentiable structure"};
}

std::vector<Vec2> torus_net(double spacing) {
  if (!(spacing > 0.0)) throw InvalidInput("net spacing must be positive");
  const auto k = static_cast<std::size_t>(std::ceil(1.0 / spacing - 1e-12));
  std::vector<Vec2> out;
  out.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      out.push_back({static_cast<double>(i) / static_cast<double>(k), static_cast<double>(j) / static_cast<double>(k)});
  return out;
}

std::vector<ShiftPoint> shift_net(const TransitionMatrix& a, double spacing) {
  const std::size_t m = lpp::word_length_for(std::min(spacing, 1.0));
  std::vector<ShiftPoint> out;
  for (const Word& w : sft::admissible_words(a, m)) {
    Word cycle = w;
    if (!a(w.back(), w.front())) {
      const auto back = sft::shortest_walk(a, w.back(), w.front(), 1);
      if (!back) continue;
      cycle.insert(cycle.end(), back->begin() + 1, back->end() - 1);
    }
    out.push_back(ShiftPoint::periodic(cycle));
  }
  return out;
}

}  // namespace mixkit
