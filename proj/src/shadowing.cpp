#include "mixkit/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixkit/errors.hpp"

namespace mixkit {

namespace {

Vec2 seam_difference(Vec2 a, Vec2 b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  dx -= std::round(dx);
  dy -= std::round(dy);
  return {dx, dy};
}

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Cyclic solution of z_{i+1} - A z_i = g_i.
std::vector<Vec2> cyclic_correction(const ToralAutomorphism& f, const std::vector<Vec2>& g) {
  const std::size_t n = g.size();
  const double lu = f.lambda_u(), ls = f.lambda_s();
  std::vector<double> rho(n), sigma(n), a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = f.split(g[i]);
    rho[i] = c[0];
    sigma[i] = c[1];
  }
  // a_i = -(1 / (1 - lu^-n)) sum_{k<n} lu^-(k+1) rho_{i+k}; recurse backwards (contracting).
  double acc = 0.0, w = 1.0 / lu;
  for (std::size_t k = 0; k < n; ++k, w /= lu) acc += w * rho[k];
  a[0] = -acc / (1.0 - std::pow(lu, -static_cast<double>(n)));
  for (std::size_t i = n - 1; i >= 1; --i) a[i] = (a[(i + 1) % n] - rho[i]) / lu;
  // b_i = (1 / (1 - ls^n)) sum_{k=1..n} ls^(k-1) sigma_{i-k}; recurse forwards (contracting).
  acc = 0.0;
  w = 1.0;
  for (std::size_t k = 1; k <= n; ++k, w *= ls) acc += w * sigma[(n - k) % n];
  b[0] = acc / (1.0 - std::pow(ls, static_cast<double>(n)));
  for (std::size_t i = 0; i + 1 < n; ++i) b[i + 1] = ls * b[i] + sigma[i];
  const Vec2 vu = f.unstable_direction(), vs = f.stable_direction();
  std::vector<Vec2> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = {a[i] * vu.x + b[i] * vs.x, a[i] * vu.y + b[i] * vs.y};
  return z;
}

std::vector<Vec2> defects(const ToralAutomorphism& f, const std::vector<Vec2>& y) {
  std::vector<Vec2> g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) g[i] = seam_difference(y[(i + 1) % y.size()], f.evaluate(y[i]));
  return g;
}

template <class S, class P>
double residual_of(const S& sys, const std::vector<P>& y) {
  double r = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) r = std::max(r, sys.distance(sys.evaluate(y[i]), y[(i + 1) % y.size()]));
  return r;
}

template <class S, class P>
double distance_between(const S& sys, const std::vector<P>& a, const std::vector<P>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, sys.distance(a[i], b[i]));
  return d;
}

template <class S, class P>
std::size_t smallest_period_of(const S& sys, const std::vector<P>& y, double tol) {
  const std::size_t n = y.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool repeats = true;
    for (std::size_t i = 0; i < n && repeats; ++i) repeats = sys.distance(y[i], y[(i + p) % n]) <= tol;
    if (repeats) return p;
  }
  return n;
}

template <class P>
void check_bound(const PeriodicOrbit<P>& orbit, double defect) {
  const double bound = orbit.constant * defect;
  if (orbit.shadow_distance > bound + 1e-12)
    throw NumericalError("shadowing bound violated: distance " + std::to_string(orbit.shadow_distance) + " > C*delta = " +
                         std::to_string(bound));
}

}  // namespace

PeriodicOrbit<Vec2> shadow_periodic(const ToralAutomorphism& f, const PseudoOrbit<Vec2>& po, const ShadowOptions& opt) {
  if (po.points.empty()) throw InvalidInput("empty pseudo-orbit");
  PeriodicOrbit<Vec2> out;
  out.constant = f.hyperbolicity().shadowing_constant();
  std::vector<Vec2> y = po.points;
  double res = residual_of(f, y);
  // A Newton step solves z_{i+1} - A z_i = g_i with g_i = y_{i+1} - f(y_i).
  while (res > opt.tol || out.iterations == 0) {
    if (out.iterations == opt.max_iterations)
      throw NumericalError("shadowing Newton iteration did not converge; last residual " + std::to_string(res));
    const auto z = cyclic_correction(f, defects(f, y));
    // y_i - z_i: f(y_i - z_i) - (y_{i+1} - z_{i+1}) = -g_i - A z_i + z_{i+1} = 0.
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = wrap({y[i].x - z[i].x, y[i].y - z[i].y});
    ++out.iterations;
    res = residual_of(f, y);
  }
  out.residual = res;
  double err = 0.0;
  for (const Vec2& z : cyclic_correction(f, defects(f, y))) err = std::max(err, norm(z));
  out.fixed_point_error = err;
  out.shadow_distance = distance_between(f, y, po.points);
  out.smallest_period = smallest_period_of(f, y, 1e-9);
  out.points = std::move(y);
  check_bound(out, residual_of(f, po.points));
  return out;
}

PeriodicOrbit<Vec2> shadow_periodic(const Horseshoe& h, const PseudoOrbit<Vec2>& po, const ShadowOptions& opt) {
  if (po.points.empty()) throw InvalidInput("empty pseudo-orbit");
  Word itinerary;
  for (const Vec2& x : po.points) {
    const auto b = h.branch(x);
    if (!b) throw PreconditionError("pseudo-orbit leaves the horseshoe strips");
    itinerary.push_back(static_cast<Symbol>(*b));
  }
  PeriodicOrbit<Vec2> out;
  out.constant = h.hyperbolicity().shadowing_constant();
  out.iterations = 1;
  Word w = itinerary;
  for (std::size_t i = 0; i < itinerary.size(); ++i) {
    out.points.push_back(h.periodic_point(w));
    std::rotate(w.begin(), w.begin() + 1, w.end());
  }
  out.residual = residual_of(h, out.points);
  if (out.residual > std::max(opt.tol, 1e-9))
    throw NumericalError("horseshoe periodic point residual " + std::to_string(out.residual));
  double drift = 0.0;
  Vec2 y = out.points[0];
  for (Symbol s : itinerary) y = h.apply_branch(s, y);
  drift = std::hypot(y.x - out.points[0].x, y.y - out.points[0].y);
  out.fixed_point_error = drift;
  out.shadow_distance = distance_between(h, out.points, po.points);
  out.smallest_period = sft::primitive_period(itinerary);
  check_bound(out, residual_of(h, po.points));
  return out;
}

PeriodicOrbit<ShiftPoint> shadow_periodic(const ShiftSystem& s, const PseudoOrbit<ShiftPoint>& po, const ShadowOptions&) {
  if (po.points.empty()) throw InvalidInput("empty pseudo-orbit");
  const double defect = residual_of(s, po.points);
  if (defect > 0.5) throw PreconditionError("symbolic shadowing needs defect <= 1/2");
  Word c;
  for (const auto& x : po.points) c.push_back(x.at(0));
  if (!s.matrix().admissible_cyclic(c)) throw PreconditionError("read-off word is not an admissible cycle");
  PeriodicOrbit<ShiftPoint> out;
  out.constant = 1.0;
  out.iterations = 1;
  const auto base = ShiftPoint::periodic(c);
  for (std::size_t i = 0; i < c.size(); ++i) out.points.push_back(base.shifted(static_cast<std::int64_t>(i)));
  out.residual = residual_of(s, out.points);
  out.fixed_point_error = s.distance(base.shifted(static_cast<std::int64_t>(c.size())), base);
  out.shadow_distance = distance_between(s, out.points, po.points);
  out.smallest_period = sft::primitive_period(c);
  check_bound(out, defect);
  return out;
}

std::vector<PeriodicOrbit<Vec2>> enumerate_periodic_orbits(const ToralAutomorphism& f, std::size_t n,
                                                           std::uint64_t cap) {
  if (n == 0) throw InvalidInput("period must be positive");
  const auto fixed = toral_fixed_points(f, n, cap);
  std::vector<PeriodicOrbit<Vec2>> out(fixed.size());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    RationalPoint x = fixed[k];
    auto& o = out[k];
    for (std::size_t i = 0; i < n; ++i) {
      o.points.push_back(x.value());
      x = f.evaluate_exact(x);
    }
    o.smallest_period = n;
    for (std::size_t p = 1; p < n; ++p) {
      if (n % p == 0 && o.points[p] == o.points[0]) {
        o.smallest_period = p;
        break;
      }
    }
    o.constant = 0.0;
  }
  return out;
}

std::vector<PeriodicOrbit<ShiftPoint>> enumerate_periodic_orbits(const ShiftSystem& s, std::size_t n,
                                                                 std::size_t cap) {
  if (n == 0) throw InvalidInput("period must be positive");
  const auto cycles = sft::enumerate_cycles(s.matrix(), n, cap);
  if (cycles.truncated) throw PreconditionError("periodic point enumeration exceeds the cap");
  std::vector<PeriodicOrbit<ShiftPoint>> out;
  for (const auto& cyc : cycles.cycles) {
    // each distinct rotation of the cycle is its own fixed point of sigma^n
    const auto base = ShiftPoint::periodic(cyc.states);
    for (std::size_t r = 0; r < cyc.primitive_period; ++r) {
      PeriodicOrbit<ShiftPoint> o;
      for (std::size_t i = 0; i < n; ++i) o.points.push_back(base.shifted(static_cast<std::int64_t>(r + i)));
      o.smallest_period = cyc.primitive_period;
      out.push_back(std::move(o));
    }
  }
  return out;
}

}  // namespace mixkit
