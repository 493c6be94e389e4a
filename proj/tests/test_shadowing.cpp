#include <cmath>
#include <random>

#include "doctest.h"
#include "mixkit/errors.hpp"
#include "mixkit/shadowing.hpp"
#include "oracles.hpp"

using namespace mixkit;

namespace {
const ToralAutomorphism cat = ToralAutomorphism::cat_map();

// Solves z_{i+1} - A z_i = g_i (cyclic) by dense Gaussian elimination.
std::vector<Vec2> dense_cyclic_solve(const std::vector<Vec2>& g) {
  const std::size_t n = g.size(), m = 2 * n;
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  const double A[2][2] = {{2, 1}, {1, 1}};
  for (std::size_t i = 0; i < n; ++i)
    for (int r = 0; r < 2; ++r) {
      auto& row = a[2 * i + r];
      row[2 * ((i + 1) % n) + r] += 1.0;
      for (int c = 0; c < 2; ++c) row[2 * i + c] -= A[r][c];
      row[m] = r == 0 ? g[i].x : g[i].y;
    }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<Vec2> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = {a[2 * i][m] / a[2 * i][2 * i], a[2 * i + 1][m] / a[2 * i + 1][2 * i + 1]};
  return z;
}

Vec2 seam(Vec2 a, Vec2 b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return {dx - std::round(dx), dy - std::round(dy)};
}
}  // namespace

TEST_CASE("exact orbits are fixed by the solver") {
  PseudoOrbit<Vec2> po{{{0.2, 0.4}, {0.8, 0.6}}, 0.0, {}};
  const auto o = shadow_periodic(cat, po);
  CHECK(o.shadow_distance < 1e-15);
  CHECK(o.residual < 1e-15);
  CHECK(o.smallest_period == 2);
}

TEST_CASE("perturbed period-2 orbit shadows back to the exact orbit") {
  PseudoOrbit<Vec2> po{{{0.2 + 1e-3, 0.4 - 1e-3}, {0.8 - 1e-3, 0.6 + 1e-3}}, 0.0, {}};
  const double delta = std::max(torus_distance(cat.evaluate(po.points[0]), po.points[1]),
                                torus_distance(cat.evaluate(po.points[1]), po.points[0]));
  const auto o = shadow_periodic(cat, po);
  CHECK(o.residual <= 1e-12);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(o.constant == doctest::Approx(phi * std::sqrt(2.0)));
  CHECK(o.shadow_distance <= o.constant * delta);
  CHECK(torus_distance(o.points[0], {0.2, 0.4}) < 1e-12);
  CHECK(torus_distance(o.points[1], {0.8, 0.6}) < 1e-12);
}

TEST_CASE("random pseudo-orbits agree with a dense linear solve") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0), kick(-1e-4, 1e-4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 6;
    std::vector<Vec2> x(n);
    x[0] = {u(rng), u(rng)};
    for (std::size_t i = 1; i < n; ++i) {
      const Vec2 fx = cat.evaluate(x[i - 1]);
      x[i] = wrap({fx.x + kick(rng), fx.y + kick(rng)});
    }
    std::vector<Vec2> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = seam(x[(i + 1) % n], cat.evaluate(x[i]));
    const auto z = dense_cyclic_solve(g);
    const auto o = shadow_periodic(cat, PseudoOrbit<Vec2>{x, 0.0, {}});
    for (std::size_t i = 0; i < n; ++i) CHECK(torus_distance(o.points[i], wrap({x[i].x - z[i].x, x[i].y - z[i].y})) < 1e-10);
    CHECK(o.residual < 1e-12);
    CHECK(o.fixed_point_error < 1e-12);
  }
}

TEST_CASE("shadowing the homoclinic pseudo-orbits of the cat map") {
  const auto q = toral_homoclinic_point(cat, {RationalPoint{1, 2, 5}, RationalPoint{4, 3, 5}});
  const double delta = 1e-2;
  const auto d = fitted_datum<ToralAutomorphism>(
      cat, [&](std::int64_t b, std::int64_t f) { return toral_datum(cat, q, delta, b, f); }, 30);
  const auto e = homoclinic::compute_excursion_parameters(cat, d);
  const auto ref = homoclinic::reference_set(d, e);
  for (std::int64_t n = e.n0; n <= e.n0 + 30; ++n) {
    const auto po = homoclinic::build_periodic_pseudo_orbit(cat, d, e, n);
    const auto o = shadow_periodic(cat, po);
    CHECK(o.residual <= 1e-10);
    CHECK(o.shadow_distance <= o.constant * po.defect);
    CHECK(o.fixed_point_error <= 1e-10);
    CHECK(o.smallest_period == static_cast<std::size_t>(n));
    CHECK(density_check(cat, o.points, ref, 3 * o.constant * delta).dense);
  }
}

TEST_CASE("symbolic shadowing re-glues the strings") {
  const TransitionMatrix golden({{1, 1}, {1, 0}});
  const ShiftSystem sys(golden);
  const auto h = symbolic_homoclinic_point(golden, Word{0, 1});
  const double delta = 0.125;
  const auto d = symbolic_datum(h, delta, 60, 200);
  const auto e = homoclinic::compute_excursion_parameters(sys, d);
  const std::int64_t m = 3;  // delta = 2^-m
  for (std::int64_t n = e.n0; n <= e.n0 + 20; ++n) {
    const auto po = homoclinic::build_periodic_pseudo_orbit(sys, d, e, n);
    const auto o = shadow_periodic(sys, po);
    CHECK(o.residual == 0.0);
    CHECK(o.fixed_point_error == 0.0);
    CHECK(o.shadow_distance <= std::ldexp(1.0, -static_cast<int>(m - 1)));
    // away from the jumps the shadow reproduces the strings on a wider window
    for (std::size_t i = 0; i < po.points.size(); ++i) {
      std::int64_t gap = n;
      for (std::size_t j : po.jumps) {
        const auto diff = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j);
        const std::int64_t cyc = ((diff % n) + n) % n;
        gap = std::min({gap, cyc, n - cyc});
      }
      const std::int64_t radius = std::max<std::int64_t>(m, gap);
      CHECK(agreement_radius(o.points[i], po.points[i]) >= std::min<std::int64_t>(radius, m));
      if (gap > m + 1) CHECK(po.points[i].window(-1, 3) == o.points[i].window(-1, 3));
    }
  }
}

TEST_CASE("horseshoe shadowing follows the itinerary") {
  const Horseshoe hs(1.0 / 3.0, 3.0);
  const Word w{0, 1, 1};
  std::vector<Vec2> pts;
  Word r = w;
  for (int i = 0; i < 3; ++i) {
    const Vec2 p = hs.periodic_point(r);
    pts.push_back({p.x + 1e-4, p.y - 1e-4});
    std::rotate(r.begin(), r.begin() + 1, r.end());
  }
  const auto o = shadow_periodic(hs, PseudoOrbit<Vec2>{pts, 0.0, {}});
  CHECK(o.residual < 1e-12);
  CHECK(o.smallest_period == 3);
  CHECK(o.shadow_distance < 2e-4);
}

TEST_CASE("cat map periodic point enumeration") {
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto orbits = enumerate_periodic_orbits(cat, n);
    const auto an = oracle::int_power2({{{2, 1}, {1, 1}}}, n);
    const std::int64_t det = std::abs((an[0][0] - 1) * (an[1][1] - 1) - an[0][1] * an[1][0]);
    CHECK(orbits.size() == static_cast<std::size_t>(det));
    if (n <= 4)
      for (const auto& o : orbits) CHECK(torus_distance(cat.evaluate(o.points.back()), o.points.front()) < 1e-9);
  }
  CHECK(enumerate_periodic_orbits(cat, 2).size() == 5);
  CHECK(enumerate_periodic_orbits(cat, 1).front().points.front() == Vec2{0.0, 0.0});
}

TEST_CASE("shift periodic point enumeration") {
  const ShiftSystem full2(TransitionMatrix::full_shift(2));
  for (std::size_t n = 1; n <= 10; ++n) CHECK(enumerate_periodic_orbits(full2, n).size() == (std::size_t{1} << n));
  const ShiftSystem golden(TransitionMatrix({{1, 1}, {1, 0}}));
  // Lucas numbers
  const std::size_t lucas[] = {2, 1, 3, 4, 7, 11, 18, 29};
  for (std::size_t n = 1; n <= 7; ++n) CHECK(enumerate_periodic_orbits(golden, n).size() == lucas[n]);
}

TEST_CASE("density checks") {
  std::vector<Vec2> level2;
  for (const auto& o : enumerate_periodic_orbits(cat, 2)) level2.push_back(o.points[0]);
  CHECK(density_check(cat, level2, torus_net(0.25), 0.6).dense);
  const auto lone = density_check(cat, {Vec2{0.0, 0.0}}, torus_net(0.25), 0.1);
  CHECK_FALSE(lone.dense);
  REQUIRE(lone.uncovered.has_value());
  CHECK(lone.covering_radius == doctest::Approx(std::sqrt(0.5)));
}
