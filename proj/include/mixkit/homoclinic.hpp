#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mixkit/errors.hpp"
#include "mixkit/maps.hpp"

namespace mixkit {

/// Systems the builder and shadowing code can run on.
template <class S>
concept DynamicalSystem = requires(const S& s, const typename S::Point& x) {
  { s.evaluate(x) } -> std::convertible_to<typename S::Point>;
  { s.distance(x, x) } -> std::convertible_to<double>;
};

/// Periodic orbit of p and a finite orbit segment of a homoclinic point q
/// with q in W^s(p) and in W^u(f(p)).
template <class Point>
struct HomoclinicDatum {
  std::vector<Point> orbit_p;  // orbit_p[k] = f^k(p), k < tau
  std::vector<Point> segment;  // segment[k + back] = f^k(q), k in [-back, fwd]
  std::int64_t back = 0;
  double delta = 0.0;

  std::size_t tau() const noexcept { return orbit_p.size(); }
  std::int64_t fwd() const noexcept { return static_cast<std::int64_t>(segment.size()) - back - 1; }
  bool has(std::int64_t k) const noexcept { return k >= -back && k <= fwd(); }
  const Point& q_orbit(std::int64_t k) const { return segment.at(static_cast<std::size_t>(k + back)); }
};

/// Samples f^k(q) for k in [-back, fwd] from a closed-form or exact generator.
template <class Point>
HomoclinicDatum<Point> make_datum(std::vector<Point> orbit_p, const std::function<Point(std::int64_t)>& q_orbit,
                                  double delta, std::int64_t back, std::int64_t fwd) {
  if (orbit_p.empty()) throw InvalidInput("empty periodic orbit");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  if (back < 0 || fwd < 0) throw InvalidInput("segment extents must be non-negative");
  HomoclinicDatum<Point> d;
  d.orbit_p = std::move(orbit_p);
  d.back = back;
  d.delta = delta;
  d.segment.reserve(static_cast<std::size_t>(back + fwd + 1));
  for (std::int64_t k = -back; k <= fwd; ++k) d.segment.push_back(q_orbit(k));
  return d;
}

struct ExcursionParameters {
  std::size_t tau = 0;
  std::int64_t n_big = 0;   // N: x = f^{N tau}(q)
  std::int64_t l = 0;       // smallest l with f^{-l tau - 1}(x) in B(p, delta/2), on the unstable side of q
  std::vector<std::int64_t> k_r;  // r * l for r = 1..tau-1
  std::int64_t big_l = 1;         // product of k_r (1 when empty)
  std::int64_t n0_product = 0;      // L tau
  std::int64_t n0 = 0;            // (L + tau l) tau: every n >= n0 is built
  std::int64_t n0_empirical = 0;  // smallest n0' with every n in [n0', n0] buildable
};

template <class Point>
struct PseudoOrbit {
  std::vector<Point> points;
  double defect = 0.0;
  std::vector<std::size_t> jumps;  // i such that x_{i+1} is not defined as f(x_i)

  std::size_t period() const noexcept { return points.size(); }
};

struct PseudoOrbitCheck {
  double max_defect = 0.0;
  bool within_delta = false;
  bool exact_period_ok = false;  // no shorter cyclic repetition
  std::size_t smallest_period = 0;
  double hausdorff = 0.0;
  double max_non_jump_defect = 0.0;
};

namespace homoclinic {

/// Excursion sizes for `n`: R = n mod tau, or tau when that is 0.
inline std::int64_t excursion_count(std::int64_t n, std::size_t tau) {
  const auto t = static_cast<std::int64_t>(tau);
  return n % t == 0 ? t : n % t;
}

template <DynamicalSystem S>
ExcursionParameters compute_excursion_parameters(const S& sys, const HomoclinicDatum<typename S::Point>& d) {
  const auto tau = static_cast<std::int64_t>(d.tau());
  const auto& p = d.orbit_p.front();
  const double radius = d.delta / 2;
  auto in_ball = [&](std::int64_t k) { return sys.distance(d.q_orbit(k), p) <= radius; };
  ExcursionParameters e;
  e.tau = d.tau();
  // N: f^{-r tau}(x) in B(p, delta/2) for r = 0..tau.
  for (std::int64_t n = 1; n * tau <= d.fwd(); ++n) {
    bool ok = true;
    for (std::int64_t r = 0; r <= tau && ok; ++r) {
      const std::int64_t k = (n - r) * tau;
      ok = d.has(k) && in_ball(k);
    }
    if (ok) {
      e.n_big = n;
      break;
    }
  }
  if (e.n_big == 0)
    throw InsufficientSegment("homoclinic segment: forward tail never enters B(p, delta/2) for tau + 1 returns",
                              d.back, 2 * d.fwd() + tau);
  // l: the backward return has to pass the excursion through q (index < 0).
  const std::int64_t x = e.n_big * tau;
  for (std::int64_t l = 1;; ++l) {
    const std::int64_t k = x - l * tau - 1;
    if (!d.has(k))
      throw InsufficientSegment("homoclinic segment: backward tail never returns to B(p, delta/2)",
                                2 * d.back + tau, d.fwd());
    if (k < 0 && in_ball(k)) {
      e.l = l;
      break;
    }
  }
  for (std::int64_t r = 1; r < tau; ++r) {
    e.k_r.push_back(r * e.l);
    e.big_l *= r * e.l;
  }
  e.n0_product = e.big_l * tau;
  e.n0 = (e.big_l + tau * e.l) * tau;
  const std::int64_t need_back = (e.l + tau) * tau + 1 - x;
  if (need_back > d.back)
    throw InsufficientSegment("homoclinic segment too short for the excursion strings", need_back, d.fwd());
  e.n0_empirical = e.n0;
  for (std::int64_t n = e.n0 - 1; n >= 1; --n) {
    if (n < excursion_count(n, d.tau()) * (e.l * tau + 1)) break;
    e.n0_empirical = n;
  }
  return e;
}

/// Indices into the segment of q used by the pseudo-orbit of period n.
inline std::vector<std::int64_t> pseudo_orbit_indices(const ExcursionParameters& e, std::int64_t n,
                                                      std::vector<std::size_t>* jumps = nullptr) {
  const auto tau = static_cast<std::int64_t>(e.tau);
  const std::int64_t reach = excursion_count(n, e.tau);
  const std::int64_t string_len = e.l * tau + 1;
  if (n < reach * string_len)
    throw PreconditionError("period " + std::to_string(n) + " is below what the excursion decomposition reaches");
  const std::int64_t x = e.n_big * tau;
  std::vector<std::int64_t> idx;
  idx.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < reach; ++j) {
    const std::int64_t start = x - (e.l + reach - j) * tau - 1;
    for (std::int64_t i = 0; i < string_len; ++i) idx.push_back(start + i);
    if (jumps) jumps->push_back(idx.size() - 1);
  }
  const std::int64_t last = n - reach * string_len;
  for (std::int64_t i = 0; i < last; ++i) idx.push_back(x + i);
  if (jumps && last > 0) jumps->push_back(idx.size() - 1);
  return idx;
}

template <DynamicalSystem S>
double cyclic_defect(const S& sys, const std::vector<typename S::Point>& pts) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    worst = std::max(worst, sys.distance(sys.evaluate(pts[i]), pts[(i + 1) % pts.size()]));
  return worst;
}

/// The strings-and-jumps pseudo-orbit of exact period n. Throws
/// PreconditionError when n < params.n0 (the range where every branch is
/// guaranteed) and InsufficientSegment when the segment lacks points.
template <DynamicalSystem S>
PseudoOrbit<typename S::Point> build_periodic_pseudo_orbit(const S& sys, const HomoclinicDatum<typename S::Point>& d,
                                                           const ExcursionParameters& e, std::int64_t n) {
  if (n < e.n0)
    throw PreconditionError("period " + std::to_string(n) + " is below N0 = " + std::to_string(e.n0) +
                            " (decomposition n = R (l tau + 1) + m tau, R = n mod tau or tau)");
  PseudoOrbit<typename S::Point> po;
  const auto idx = pseudo_orbit_indices(e, n, &po.jumps);
  const std::int64_t lo = *std::min_element(idx.begin(), idx.end());
  const std::int64_t hi = *std::max_element(idx.begin(), idx.end());
  if (!d.has(lo) || !d.has(hi))
    throw InsufficientSegment("homoclinic segment too short for period " + std::to_string(n),
                              std::max<std::int64_t>(d.back, -lo), std::max<std::int64_t>(d.fwd(), hi));
  po.points.reserve(idx.size());
  for (std::int64_t k : idx) po.points.push_back(d.q_orbit(k));
  po.defect = cyclic_defect(sys, po.points);
  return po;
}

template <DynamicalSystem S>
PseudoOrbitCheck verify_pseudo_orbit(const S& sys, const PseudoOrbit<typename S::Point>& po, double delta,
                                     const std::vector<typename S::Point>& reference, double same_tol = 0.0) {
  PseudoOrbitCheck c;
  const auto& pts = po.points;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double step = sys.distance(sys.evaluate(pts[i]), pts[(i + 1) % n]);
    c.max_defect = std::max(c.max_defect, step);
    if (std::find(po.jumps.begin(), po.jumps.end(), i) == po.jumps.end())
      c.max_non_jump_defect = std::max(c.max_non_jump_defect, step);
  }
  c.within_delta = c.max_defect <= delta;
  c.smallest_period = n;
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool repeats = true;
    for (std::size_t i = 0; i < n && repeats; ++i) repeats = sys.distance(pts[i], pts[(i + p) % n]) <= same_tol;
    if (repeats) {
      c.smallest_period = p;
      break;
    }
  }
  c.exact_period_ok = c.smallest_period == n;
  double forward = 0.0, backward = 0.0;
  for (const auto& x : pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : reference) best = std::min(best, sys.distance(x, r));
    forward = std::max(forward, best);
  }
  for (const auto& r : reference) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : pts) best = std::min(best, sys.distance(x, r));
    backward = std::max(backward, best);
  }
  c.hausdorff = std::max(forward, backward);
  return c;
}

/// O(p) together with the orbit points of q from the segment that the
/// period-n pseudo-orbits draw on (indices x - (l + tau) tau - 1 .. x + tau).
template <class Point>
std::vector<Point> reference_set(const HomoclinicDatum<Point>& d, const ExcursionParameters& e) {
  std::vector<Point> ref = d.orbit_p;
  const auto tau = static_cast<std::int64_t>(e.tau);
  const std::int64_t x = e.n_big * tau;
  for (std::int64_t k = x - (e.l + tau) * tau - 1; k <= x + tau; ++k)
    if (d.has(k)) ref.push_back(d.q_orbit(k));
  return ref;
}

}  // namespace homoclinic

/// Homoclinic datum for a periodic orbit of a toral automorphism.
HomoclinicDatum<Vec2> toral_datum(const ToralAutomorphism& f, const ToralHomoclinic& h, double delta,
                                  std::int64_t back, std::int64_t fwd);
/// Homoclinic datum for a primitive periodic word of a subshift.
HomoclinicDatum<ShiftPoint> symbolic_datum(const SymbolicHomoclinic& h, double delta, std::int64_t back,
                                           std::int64_t fwd);

/// Datum with segment extents grown until the excursion parameters and the
/// period-n_max strings fit.
template <DynamicalSystem S>
HomoclinicDatum<typename S::Point> fitted_datum(
    const S& sys, const std::function<HomoclinicDatum<typename S::Point>(std::int64_t, std::int64_t)>& make,
    std::int64_t n_max_extra = 0, std::int64_t start = 16, std::int64_t limit = 1 << 16) {
  std::int64_t back = start, fwd = start;
  for (;;) {
    auto d = make(back, fwd);
    try {
      const auto e = homoclinic::compute_excursion_parameters(sys, d);
      const std::int64_t need_fwd = e.n_big * static_cast<std::int64_t>(e.tau) + e.n0 + n_max_extra;
      if (need_fwd <= d.fwd()) return d;
      fwd = need_fwd;
    } catch (const InsufficientSegment& err) {
      back = std::max<std::int64_t>(back + 1, err.required_back());
      fwd = std::max<std::int64_t>(fwd + 1, err.required_fwd());
    }
    if (back > limit || fwd > limit) throw InsufficientSegment("homoclinic segment would exceed the size limit", back, fwd);
  }
}

}  // namespace mixkit
