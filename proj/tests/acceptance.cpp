// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "mixkit/errors.hpp"
#include "mixkit/homoclinic.hpp"
#include "mixkit/lpp.hpp"
#include "mixkit/measure.hpp"
#include "mixkit/shadowing.hpp"
#include "oracles.hpp"

using namespace mixkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(budget_s)) + " s budget";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Irreducible matrix whose states are split into `period` cyclic classes.
oracle::Rows random_cyclic(std::mt19937_64& rng, std::size_t n, std::size_t period, double density) {
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<std::size_t> pick(0, period - 1);
  for (;;) {
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = i < period ? i : pick(rng);
    oracle::Rows r(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (cls[j] == (cls[i] + 1) % period) r[i][j] = coin(rng);
    if (TransitionMatrix::is_valid_essential(r) && oracle::reaches_all(r)) return r;
  }
}

Outcome criterion_lpp() {
  std::size_t total = 0, mismatches = 0, primitive = 0;
  auto check = [&](const oracle::Rows& rows) {
    const TransitionMatrix a(rows);
    const bool prim = sft::is_primitive(a);
    if (prim != oracle::some_power_positive(rows, rows.size() * rows.size())) ++mismatches;
    const auto r = lpp::lpp_certificate(a, 0.25, 100);
    if (std::holds_alternative<LppCertificate>(r) != prim) ++mismatches;
    ++total;
    primitive += prim;
  };
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n * n)); ++bits) {
      oracle::Rows rows(n, std::vector<int>(n));
      for (std::size_t i = 0; i < n * n; ++i) rows[i / n][i % n] = static_cast<int>((bits >> i) & 1U);
      if (TransitionMatrix::is_valid_essential(rows)) check(rows);
    }
  const std::size_t exhaustive = total;
  std::mt19937_64 rng(20240601);
  const double density[] = {0.3, 0.5, 0.7};
  for (std::size_t k = 0; k < 500; ++k) check(oracle::random_essential(rng, 5 + k % 2, density[k % 3]));
  return {mismatches == 0, std::to_string(exhaustive) + " essential matrices up to 4 states + 500 random 5-6 state, " +
                               std::to_string(primitive) + " primitive, " + std::to_string(mismatches) + " mismatches"};
}

struct CatData {
  HomoclinicDatum<Vec2> datum;
  ExcursionParameters params;
};

CatData cat_data(std::int64_t extra) {
  const auto cat = ToralAutomorphism::cat_map();
  const auto q = toral_homoclinic_point(cat, {RationalPoint{1, 2, 5}, RationalPoint{4, 3, 5}});
  auto d = fitted_datum<ToralAutomorphism>(
      cat, [&](std::int64_t b, std::int64_t f) { return toral_datum(cat, q, 1e-2, b, f); }, extra);
  const auto e = homoclinic::compute_excursion_parameters(cat, d);
  return {std::move(d), e};
}

Outcome criterion_pseudo_orbits() {
  bool ok = true;
  std::string detail;
  {
    const TransitionMatrix full2 = TransitionMatrix::full_shift(2);
    const ShiftSystem sys(full2);
    const auto h = symbolic_homoclinic_point(full2, Word{0, 1});
    const double delta = 0.125;
    auto make = [&](std::int64_t b, std::int64_t f) { return symbolic_datum(h, delta, b, f); };
    const auto d = fitted_datum<ShiftSystem>(sys, make, 50);
    const auto e = homoclinic::compute_excursion_parameters(sys, d);
    for (std::int64_t n = e.n0; n <= e.n0 + 50; ++n) {
      const auto po = homoclinic::build_periodic_pseudo_orbit(sys, d, e, n);
      const auto c = homoclinic::verify_pseudo_orbit(sys, po, delta, homoclinic::reference_set(d, e));
      ok = ok && po.period() == static_cast<std::size_t>(n) && c.exact_period_ok && c.within_delta;
    }
    detail += "shift p=01 delta=1/8: N=" + std::to_string(e.n_big) + " l=" + std::to_string(e.l) +
              " N0=" + std::to_string(e.n0) + " (L*tau=" + std::to_string(e.n0_product) + ")";
  }
  {
    const auto cat = ToralAutomorphism::cat_map();
    const auto [d, e] = cat_data(50);
    double worst = 0.0;
    for (std::int64_t n = e.n0; n <= e.n0 + 50; ++n) {
      const auto po = homoclinic::build_periodic_pseudo_orbit(cat, d, e, n);
      const auto c = homoclinic::verify_pseudo_orbit(cat, po, 1e-2, homoclinic::reference_set(d, e), 1e-12);
      worst = std::max(worst, c.max_defect);
      ok = ok && po.period() == static_cast<std::size_t>(n) && c.exact_period_ok && c.within_delta;
    }
    detail += "; cat period-2 delta=1e-2: N=" + std::to_string(e.n_big) + " l=" + std::to_string(e.l) +
              " N0=" + std::to_string(e.n0) + ", worst defect " + fmt("%.2e", worst);
  }
  return {ok, detail + ", n in [N0, N0+50]"};
}

Outcome criterion_shadowing() {
  const auto cat = ToralAutomorphism::cat_map();
  const auto [d, e] = cat_data(50);
  const auto ref = homoclinic::reference_set(d, e);
  const double delta = 1e-2;
  const double c_const = cat.hyperbolicity().shadowing_constant();
  bool ok = true;
  double worst_res = 0, worst_shadow = 0, worst_fix = 0, worst_cover = 0;
  for (std::int64_t n = e.n0; n <= e.n0 + 50; ++n) {
    const auto po = homoclinic::build_periodic_pseudo_orbit(cat, d, e, n);
    const auto o = shadow_periodic(cat, po);
    const auto dense = density_check(cat, o.points, ref, 3 * c_const * delta);
    worst_res = std::max(worst_res, o.residual);
    worst_shadow = std::max(worst_shadow, o.shadow_distance);
    worst_fix = std::max(worst_fix, o.fixed_point_error);
    worst_cover = std::max(worst_cover, dense.covering_radius);
    ok = ok && o.residual <= 1e-10 && o.shadow_distance <= c_const * delta && o.fixed_point_error <= 1e-10 &&
         dense.dense;
  }
  return {ok, "C=" + fmt("%.4f", c_const) + ", max residual " + fmt("%.1e", worst_res) + ", max shadow distance " +
                  fmt("%.2e", worst_shadow) + ", max fixed-point error " + fmt("%.1e", worst_fix) +
                  ", covering radius " + fmt("%.3f", worst_cover) + " <= 3*C*delta"};
}

Outcome criterion_fixed_points() {
  const auto cat = ToralAutomorphism::cat_map();
  const double lambda = cat.lambda_u();
  bool ok = true;
  std::string counts;
  for (std::size_t n = 1; n <= 10; ++n) {
    const std::size_t found = enumerate_periodic_orbits(cat, n).size();
    const std::uint64_t trace = toral_fixed_point_count(cat, n);
    const auto closed = static_cast<std::uint64_t>(std::llround(std::pow(lambda, n) + std::pow(lambda, -double(n)) - 2));
    ok = ok && found == trace && trace == closed;
    counts += (n > 1 ? "," : "") + std::to_string(found);
  }
  return {ok, "|Fix(f^n)| n=1..10: " + counts};
}

Outcome criterion_decomposition() {
  std::mt19937_64 rng(77);
  std::size_t bad = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t period = 2 + k % 3;
    const auto rows = random_cyclic(rng, period + 1 + k % 4, period, 0.6);
    const TransitionMatrix a(rows);
    const auto dec = sft::cyclic_decomposition(a);
    bool ok = dec.period == sft::class_period(a) && dec.period == period && dec.classes.size() == period;
    const auto power = oracle::bool_power(rows, dec.period);
    for (const auto& cls : dec.classes) {
      oracle::Rows sub(cls.size(), std::vector<int>(cls.size()));
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = 0; j < cls.size(); ++j) sub[i][j] = power[cls[i]][cls[j]];
      ok = ok && oracle::some_power_positive(sub, cls.size() * cls.size() + 1);
    }
    bad += !ok;
  }
  return {bad == 0, "50 random irreducible non-primitive matrices (l = 2..4), " + std::to_string(bad) + " failures"};
}

Outcome criterion_return_times() {
  std::mt19937_64 rng(99);
  std::size_t bad = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 3 + k % 4;
    const auto rows = k % 2 ? random_cyclic(rng, n, 2 + (k / 2) % 2, 0.6) : oracle::random_irreducible(rng, n, 0.5);
    const TransitionMatrix a(rows);
    const std::size_t l = sft::class_period(a);
    std::uniform_int_distribution<std::size_t> len(1, 3);
    const auto pick = [&](std::size_t length) {
      const auto words = sft::admissible_words(a, length);
      return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
    };
    const Word u = pick(len(rng)), v = pick(len(rng));
    const std::size_t horizon = 200, transient = n * n + u.size() + v.size();
    const auto times = sft::return_time_set(a, u, v, horizon);
    std::vector<std::size_t> tail;
    for (std::size_t t : times)
      if (t >= transient) tail.push_back(t);
    bool ok = !tail.empty() && tail.front() < transient + l && tail.back() + l > horizon;
    for (std::size_t i = 1; i < tail.size() && ok; ++i) ok = tail[i] - tail[i - 1] == l;
    bad += !ok;
  }
  return {bad == 0, "20 random irreducible matrices with random cylinder pairs, " + std::to_string(bad) + " failures"};
}

Outcome criterion_bernoulli() {
  const TransitionMatrix full2 = TransitionMatrix::full_shift(2);
  ShiftAtoms target;
  target.points = {ShiftPoint::periodic(Word{0}), ShiftPoint::periodic(Word{1})};
  target.weights = {0.5, 0.5};
  const auto fam = cylinder_family(2, 3);
  BernoulliOptions opt;
  opt.full_scan = true;
  const auto r = bernoulli_approximation(target, full2, {}, 0.1, fam, opt);
  bool monotone = true;
  const BlockStep* prev = nullptr;
  std::size_t mixing_steps = 0;
  for (const auto& s : r.scan) {
    if (!s.primitive) continue;
    ++mixing_steps;
    if (prev && s.distance_to_periodic > prev->distance_to_periodic + 1e-12) monotone = false;
    prev = &s;
  }
  const double direct = weak_star_distance(*r.measure, target, fam);
  std::string p;
  for (Symbol s : r.p) p += static_cast<char>('0' + s);
  const bool ok = r.within && sft::is_primitive(r.measure->support) && monotone && direct <= 0.1;
  return {ok, "p=" + p + " d(mu_p,target)=" + fmt("%.4f", r.periodic_distance) + ", m=" + std::to_string(r.m) +
                  ", d(nu,target)=" + fmt("%.4f", direct) + ", " + std::to_string(r.measure->support.size()) +
                  "-state primitive chain, distance nonincreasing over " + std::to_string(mixing_steps) + " values of m"};
}

Outcome criterion_correlations() {
  const TransitionMatrix golden({{1, 1}, {1, 0}});
  const auto mu = parry_measure(golden);
  const auto fit = correlation_decay(mu, Word{0}, 30);
  const auto pd = sft::perron(golden);
  const double lambda2 = 1.0 - pd.root;  // trace = 1
  const double target = std::abs(lambda2) / pd.root;
  const bool ok = std::abs(fit.rho - target) <= 1e-3 && fit.r_squared >= 0.99;
  return {ok, "fitted rho " + fmt("%.6f", fit.rho) + " vs |l2|/l1 " + fmt("%.6f", target) + ", R^2 " +
                  fmt("%.6f", fit.r_squared)};
}

Outcome criterion_lebesgue() {
  const auto cat = ToralAutomorphism::cat_map();
  PeriodicSearchOptions opt;
  opt.max_period = 30;
  const auto r = approximate_by_periodic(Lebesgue{}, cat, 0.05, mode_family(3), opt);
  return {r.within && r.period <= 30, "period " + std::to_string(r.period) + " orbit at distance " +
                                          fmt("%.4f", r.distance) + " (" + std::to_string(r.candidates_scanned) +
                                          " orbits scanned)"};
}

}  // namespace

int main() {
  run(1, "LPP certificate iff primitive", 120, criterion_lpp);
  run(2, "exact-period pseudo-orbits from homoclinic data", 60, criterion_pseudo_orbits);
  run(3, "shadowing of the cat map pseudo-orbits", 120, criterion_shadowing);
  run(4, "cat map fixed-point counts", 60, criterion_fixed_points);
  run(5, "cyclic decomposition", 60, criterion_decomposition);
  run(6, "return times form a progression with gap l", 60, criterion_return_times);
  run(7, "Bernoulli approximation of (mu_0 + mu_1)/2", 120, criterion_bernoulli);
  run(8, "golden mean Parry correlation decay", 30, criterion_correlations);
  run(9, "periodic approximation of Lebesgue", 60, criterion_lebesgue);
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
