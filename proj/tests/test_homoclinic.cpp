#include <cmath>

#include "doctest.h"
#include "mixkit/errors.hpp"
#include "mixkit/homoclinic.hpp"

using namespace mixkit;

namespace {
// q for p = (01)^inf in the full 2-shift, written out symbol by symbol:
// ... 1 0 1 0 | 0 1 0 1 ...  (coordinate 0 right of the bar)
int q_symbol(std::int64_t i) { return i < 0 ? static_cast<int>(((i + 1) % 2 + 2) % 2) : static_cast<int>(i % 2); }
int p_symbol(std::int64_t i) { return static_cast<int>((i % 2 + 2) % 2); }

// Distance of sigma^k(q) to p in the two-sided metric, by direct comparison.
double dist_to_p(std::int64_t k) {
  for (std::int64_t r = 0; r < 200; ++r)
    if (q_symbol(r + k) != p_symbol(r) || q_symbol(-r + k) != p_symbol(-r)) return std::ldexp(1.0, -static_cast<int>(r));
  return 0.0;
}

const ToralAutomorphism cat = ToralAutomorphism::cat_map();
}  // namespace

TEST_CASE("symbolic period-2 datum excursion parameters") {
  const TransitionMatrix full2 = TransitionMatrix::full_shift(2);
  const auto h = symbolic_homoclinic_point(full2, Word{0, 1});
  const double delta = 0.125;
  const auto d = symbolic_datum(h, delta, 40, 120);
  const ShiftSystem sys(full2);
  const auto e = homoclinic::compute_excursion_parameters(sys, d);

  std::int64_t n_oracle = 1;
  while (true) {
    bool ok = true;
    for (std::int64_t r = 0; r <= 2; ++r) ok = ok && dist_to_p(2 * (n_oracle - r)) <= delta / 2;
    if (ok) break;
    ++n_oracle;
  }
  std::int64_t l_oracle = 1;
  while (!(2 * n_oracle - 2 * l_oracle - 1 < 0 && dist_to_p(2 * n_oracle - 2 * l_oracle - 1) <= delta / 2)) ++l_oracle;

  CHECK(e.n_big == n_oracle);
  CHECK(e.l == l_oracle);
  CHECK(e.big_l == l_oracle);
  CHECK(e.n0_product == 2 * l_oracle);
  CHECK(e.n0 == (l_oracle + 2 * l_oracle) * 2);
  CHECK(e.n0_empirical <= e.n0);

  const auto ref = homoclinic::reference_set(d, e);
  for (std::int64_t n = e.n0; n <= e.n0 + 50; ++n) {
    const auto po = homoclinic::build_periodic_pseudo_orbit(sys, d, e, n);
    REQUIRE(po.period() == static_cast<std::size_t>(n));
    const auto c = homoclinic::verify_pseudo_orbit(sys, po, delta, ref);
    CHECK(c.within_delta);
    CHECK(c.exact_period_ok);
    CHECK(c.max_non_jump_defect == 0.0);
    CHECK(c.hausdorff <= delta);
  }
  CHECK_THROWS_AS(homoclinic::build_periodic_pseudo_orbit(sys, d, e, e.n0 - 1), PreconditionError);
}

TEST_CASE("cat map period-2 datum") {
  const auto q = toral_homoclinic_point(cat, {RationalPoint{1, 2, 5}, RationalPoint{4, 3, 5}});
  const double delta = 1e-2;
  auto make = [&](std::int64_t b, std::int64_t f) { return toral_datum(cat, q, delta, b, f); };
  const auto d = fitted_datum<ToralAutomorphism>(cat, make, 50);
  const auto e = homoclinic::compute_excursion_parameters(cat, d);
  CHECK(e.tau == 2);
  CHECK(e.n0 == (e.l + 2 * e.l) * 2);
  const auto ref = homoclinic::reference_set(d, e);
  for (std::int64_t n = e.n0; n <= e.n0 + 50; ++n) {
    const auto po = homoclinic::build_periodic_pseudo_orbit(cat, d, e, n);
    const auto c = homoclinic::verify_pseudo_orbit(cat, po, delta, ref, 1e-12);
    CHECK(c.within_delta);
    CHECK(c.exact_period_ok);
    CHECK(c.max_non_jump_defect < 1e-9);
    CHECK(c.hausdorff <= delta);
  }
}

TEST_CASE("fixed point datum uses one excursion") {
  const auto q = toral_homoclinic_point(cat, {RationalPoint{0, 0, 1}});
  const double delta = 0.05;
  const auto d = fitted_datum<ToralAutomorphism>(cat, [&](std::int64_t b, std::int64_t f) {
    return toral_datum(cat, q, delta, b, f);
  });
  const auto e = homoclinic::compute_excursion_parameters(cat, d);
  CHECK(e.tau == 1);
  CHECK(e.k_r.empty());
  CHECK(e.n0 == e.l + 1);
  const auto po = homoclinic::build_periodic_pseudo_orbit(cat, d, e, e.n0 + 3);
  CHECK(po.jumps.size() == 2);
  CHECK(homoclinic::verify_pseudo_orbit(cat, po, delta, homoclinic::reference_set(d, e), 1e-12).within_delta);
}

TEST_CASE("short segments report the extension needed") {
  const auto h = symbolic_homoclinic_point(TransitionMatrix::full_shift(2), Word{0, 1});
  const ShiftSystem sys(TransitionMatrix::full_shift(2));
  const auto d = symbolic_datum(h, 0.125, 4, 4);
  try {
    homoclinic::compute_excursion_parameters(sys, d);
    FAIL("expected InsufficientSegment");
  } catch (const InsufficientSegment& err) {
    CHECK(err.required_back() + err.required_fwd() > 8);
  }
  CHECK_THROWS_AS(symbolic_datum(h, 0.0, 4, 4), InvalidInput);
}
