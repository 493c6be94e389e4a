#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixkit/homoclinic.hpp"
#include "mixkit/maps.hpp"
#include "mixkit/sft.hpp"

namespace mixkit {

template <class Point>
struct PeriodicOrbit {
  std::vector<Point> points;
  double residual = 0.0;         // max d(f(y_i), y_{i+1})
  double shadow_distance = 0.0;  // max d(y_i, x_i) to the source pseudo-orbit
  double constant = 0.0;         // C with shadow_distance <= C * defect
  double fixed_point_error = 0.0;
  std::size_t iterations = 0;
  std::size_t smallest_period = 0;

  std::size_t period() const noexcept { return points.size(); }
};

struct ShadowOptions {
  double tol = 1e-12;
  std::size_t max_iterations = 50;
};

/// Newton iteration on f(y_i) = y_{i+1}, linear solve split along the
/// eigenlines (one exact correction per step since the map is linear).
PeriodicOrbit<Vec2> shadow_periodic(const ToralAutomorphism& f, const PseudoOrbit<Vec2>& po,
                                    const ShadowOptions& opt = {});
/// Periodic orbit of the itinerary read off the pseudo-orbit.
PeriodicOrbit<Vec2> shadow_periodic(const Horseshoe& h, const PseudoOrbit<Vec2>& po, const ShadowOptions& opt = {});
/// y_i = sigma^i(c^inf) with c_i = (x_i)_0; requires defect <= 1/2.
PeriodicOrbit<ShiftPoint> shadow_periodic(const ShiftSystem& s, const PseudoOrbit<ShiftPoint>& po,
                                          const ShadowOptions& opt = {});

/// One orbit per point of Fix(f^n) (points f^i(x), i < n).
std::vector<PeriodicOrbit<Vec2>> enumerate_periodic_orbits(const ToralAutomorphism& f, std::size_t n,
                                                           std::uint64_t cap = 1'000'000);
std::vector<PeriodicOrbit<ShiftPoint>> enumerate_periodic_orbits(const ShiftSystem& s, std::size_t n,
                                                                 std::size_t cap = 1'000'000);

template <class Point>
struct DensityResult {
  bool dense = false;
  std::optional<Point> uncovered;
  double covering_radius = 0.0;  // max over the net of the distance to the orbit
};

/// Every net point within epsilon of some orbit point; otherwise the net
/// point farthest from the orbit.
template <DynamicalSystem S>
DensityResult<typename S::Point> density_check(const S& sys, const std::vector<typename S::Point>& orbit,
                                               const std::vector<typename S::Point>& net, double epsilon) {
  DensityResult<typename S::Point> r;
  for (const auto& z : net) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : orbit) best = std::min(best, sys.distance(z, y));
    if (best > r.covering_radius) {
      r.covering_radius = best;
      if (best > epsilon) r.uncovered = z;
    }
  }
  r.dense = !r.uncovered;
  return r;
}

}  // namespace mixkit
