#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixkit/shift_point.hpp"
#include "mixkit/sft.hpp"

namespace mixkit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

using IntMatrix2 = std::array<std::array<std::int64_t, 2>, 2>;

/// Point of the torus with coordinates num / den, numerators in [0, den).
struct RationalPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t den = 1;

  Vec2 value() const noexcept { return {static_cast<double>(x) / den, static_cast<double>(y) / den}; }
  bool operator==(const RationalPoint&) const = default;
  auto operator<=>(const RationalPoint&) const = default;
};

/// Map (x, y) into [0, 1)^2.
Vec2 wrap(Vec2 p) noexcept;
/// Euclidean distance on the flat torus (shortest representative).
double torus_distance(Vec2 a, Vec2 b) noexcept;

/// Hyperbolicity data shared by the smooth backends.
struct Hyperbolicity {
  double mu_s = 0.0;  // contraction rate, < 1
  double mu_u = 0.0;  // expansion rate, > 1
  // Bound on |stable component| + |unstable component| (in the metric sense)
  // relative to |v|, for the declared splitting.
  double splitting_factor = 1.0;

  /// max(1/(1 - mu_s), 1/(1 - 1/mu_u)) times the splitting factor.
  double shadowing_constant() const noexcept;
};

/// Hyperbolic toral automorphism x -> A x mod 1.
class ToralAutomorphism {
 public:
  using Point = Vec2;

  /// Throws InvalidInput unless det A = +-1 and no eigenvalue has modulus 1.
  explicit ToralAutomorphism(const IntMatrix2& a);
  static ToralAutomorphism cat_map() { return ToralAutomorphism({{{2, 1}, {1, 1}}}); }

  const IntMatrix2& matrix() const noexcept { return a_; }
  Vec2 evaluate(Vec2 p) const noexcept;
  /// Linear part without reduction mod 1.
  Vec2 apply_linear(Vec2 v) const noexcept;
  double distance(Vec2 a, Vec2 b) const noexcept { return torus_distance(a, b); }
  std::array<std::array<double, 2>, 2> differential() const noexcept;

  double lambda_u() const noexcept { return lambda_u_; }  // signed eigenvalue, |.| > 1
  double lambda_s() const noexcept { return lambda_s_; }  // signed eigenvalue, |.| < 1
  Vec2 unstable_direction() const noexcept { return v_u_; }
  Vec2 stable_direction() const noexcept { return v_s_; }
  /// Coordinates (a, b) with v = a v_u + b v_s.
  std::array<double, 2> split(Vec2 v) const noexcept;
  Hyperbolicity hyperbolicity() const noexcept;

  /// A^n with overflow detection.
  IntMatrix2 power(std::uint64_t n) const;
  RationalPoint evaluate_exact(const RationalPoint& p) const;

 private:
  IntMatrix2 a_;
  double lambda_u_ = 0.0;
  double lambda_s_ = 0.0;
  Vec2 v_u_;
  Vec2 v_s_;
};

/// |det(A^n - I)| = |det(A)^n - tr(A^n) + 1|, computed with overflow checks.
std::uint64_t toral_fixed_point_count(const ToralAutomorphism& f, std::uint64_t n);

/// Fix(f^n) as exact rational points, sorted. OpenMP kernel. Throws
/// PreconditionError when |det(A^n - I)| exceeds `cap`.
std::vector<RationalPoint> toral_fixed_points(const ToralAutomorphism& f, std::uint64_t n,
                                              std::uint64_t cap = 1'000'000);
/// Single-threaded reference for toral_fixed_points.
std::vector<RationalPoint> toral_fixed_points_serial(const ToralAutomorphism& f, std::uint64_t n,
                                                     std::uint64_t cap = 1'000'000);

/// Fix(f^n) grouped into orbits; each orbit starts at its smallest point and
/// orbits are ordered by that point.
std::vector<std::vector<RationalPoint>> toral_orbits(const ToralAutomorphism& f, std::uint64_t n,
                                                     std::uint64_t cap = 1'000'000);

/// Two-branch affine horseshoe on the unit square:
///   H0 = [0,1] x [0,1/e] -> (c x, e y),  H1 = [0,1] x [1-1/e,1] -> (1 - c + c x, e y - e + 1).
/// The maximal invariant set is coded by the full 2-shift.
class Horseshoe {
 public:
  using Point = Vec2;

  /// Throws InvalidInput unless 0 < c < 1/2 and e > 2.
  Horseshoe(double contraction, double expansion);

  double contraction() const noexcept { return c_; }
  double expansion() const noexcept { return e_; }
  /// Branch containing p (0 or 1), or nullopt outside H0 and H1.
  std::optional<int> branch(Vec2 p) const noexcept;
  /// Applies the branch of p; points outside both strips use the nearer one.
  Vec2 evaluate(Vec2 p) const noexcept;
  Vec2 apply_branch(int b, Vec2 p) const noexcept;
  double distance(Vec2 a, Vec2 b) const noexcept;
  std::array<std::array<double, 2>, 2> differential() const noexcept;
  Hyperbolicity hyperbolicity() const noexcept;

  /// The periodic point with itinerary word^inf (f^k(x) in H_{word[k mod |word|]}).
  Vec2 periodic_point(std::span<const Symbol> word) const;
  /// Itinerary of the first `length` iterates; nullopt if the orbit leaves the strips.
  std::optional<Word> itinerary(Vec2 p, std::size_t length) const;

 private:
  double c_;
  double e_;
};

/// Row of the coding table: word w and the periodic point with itinerary w^inf.
struct CodingEntry {
  Word word;
  Vec2 point;
};
std::vector<CodingEntry> coding_table(const Horseshoe& h, std::size_t depth);

/// Subshift of finite type viewed as a system (sigma on eventually periodic points).
class ShiftSystem {
 public:
  using Point = ShiftPoint;

  explicit ShiftSystem(TransitionMatrix a) : a_(std::move(a)) {}
  const TransitionMatrix& matrix() const noexcept { return a_; }
  ShiftPoint evaluate(const ShiftPoint& x) const { return x.shifted(1); }
  double distance(const ShiftPoint& x, const ShiftPoint& y) const { return shift_distance(x, y); }

 private:
  TransitionMatrix a_;
};

/// Homoclinic point of the torus: q on W^s(p) and on W^u(f(p)) (translated by
/// a deck vector). Orbit points are evaluated in closed form along the
/// invariant lines, which avoids the growth of rounding errors under f^j.
struct ToralHomoclinic {
  std::vector<RationalPoint> orbit;  // O(p), orbit[k] = f^k(p)
  double t = 0.0;                    // q = p + t v_s
  double s = 0.0;                    // q = f(p) + s v_u + k
  std::array<std::int64_t, 2> deck{};
  std::int64_t radius = 0;  // deck translates searched

  Vec2 point(const ToralAutomorphism& f, std::int64_t j) const;  // f^j(q)
};

/// Searches deck translates |k|_inf <= radius; throws PreconditionError when
/// no transverse intersection is found.
ToralHomoclinic toral_homoclinic_point(const ToralAutomorphism& f, std::vector<RationalPoint> orbit,
                                       std::int64_t radius = 4);

/// Homoclinic point of a periodic word p (primitive, length tau): left tail is
/// the orbit of sigma(p), right tail the orbit of p, glued by the shortest
/// (then lexicographically least) admissible splice.
struct SymbolicHomoclinic {
  Word p;
  Word splice;          // symbols at coordinates 0..|splice|-1
  ShiftPoint q;
  Word excursion;  // p_0, splice, then p_s..p_{tau-1} when s = |splice| mod tau is nonzero; length = 1 mod tau
};

SymbolicHomoclinic symbolic_homoclinic_point(const TransitionMatrix& a, std::span<const Symbol> p);

/// Lyapunov exponents of a periodic orbit, in decreasing order.
struct LyapunovReport {
  std::vector<double> exponents;
  bool defined = true;
  std::string note;
};
LyapunovReport lyapunov_exponents_periodic(const ToralAutomorphism& f, std::size_t period);
LyapunovReport lyapunov_exponents_periodic(const Horseshoe& h, std::span<const Symbol> itinerary);
LyapunovReport lyapunov_exponents_periodic(const ShiftSystem& s, std::size_t period);

/// Grid {(i/k, j/k)} with k = ceil(1/spacing).
std::vector<Vec2> torus_net(double spacing);
/// One periodic representative w^inf per admissible m-word w, m = smallest with 2^-m <= spacing.
std::vector<ShiftPoint> shift_net(const TransitionMatrix& a, double spacing);

}  // namespace mixkit
