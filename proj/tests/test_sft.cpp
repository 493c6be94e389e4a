#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mixkit/errors.hpp"
#include "mixkit/sft.hpp"
#include "mixkit/shift_point.hpp"
#include "oracles.hpp"

using namespace mixkit;

namespace {
const TransitionMatrix golden({{1, 1}, {1, 0}});
const TransitionMatrix parity({{0, 1}, {1, 0}});
const TransitionMatrix full2 = TransitionMatrix::full_shift(2);
}  // namespace

TEST_CASE("construction rejects non-essential matrices") {
  CHECK_THROWS_AS(TransitionMatrix({{1, 1}, {0, 0}}), InvalidInput);
  CHECK_THROWS_AS(TransitionMatrix({{1, 0}, {1, 0}}), InvalidInput);
  CHECK_THROWS_AS(TransitionMatrix({{1, 2}, {1, 0}}), InvalidInput);
  CHECK_THROWS_AS(TransitionMatrix({{1, 1}}), InvalidInput);
  CHECK_THROWS_AS(TransitionMatrix::full_shift(65), InvalidInput);
  CHECK_NOTHROW(TransitionMatrix::full_shift(64));
}

TEST_CASE("irreducibility and primitivity examples") {
  CHECK(sft::is_irreducible(golden));
  CHECK_FALSE(sft::is_irreducible(TransitionMatrix({{1, 0}, {0, 1}})));
  CHECK(sft::is_irreducible(parity));
  CHECK(sft::is_primitive(golden));
  CHECK_FALSE(sft::is_primitive(parity));
  CHECK(sft::is_primitive(full2));
}

TEST_CASE("class period examples") {
  CHECK(sft::class_period(parity) == 2);
  CHECK(sft::class_period(TransitionMatrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})) == 3);
  CHECK(sft::class_period(golden) == 1);
  CHECK_THROWS_AS(sft::class_period(TransitionMatrix({{1, 0}, {0, 1}})), PreconditionError);
}

TEST_CASE("cyclic decomposition of a 4-cycle with a 2-cycle shortcut") {
  // 0->1->2->3->0 plus 1->0: cycles of lengths 4 and 2.
  const TransitionMatrix a({{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}});
  const auto d = sft::cyclic_decomposition(a);
  CHECK(d.period == 2);
  REQUIRE(d.classes.size() == 2);
  CHECK(d.classes[0] == std::vector<std::size_t>{0, 2});
  CHECK(d.classes[1] == std::vector<std::size_t>{1, 3});
}

TEST_CASE("irreducible matrices: primitive iff period one, and decomposition structure") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto rows = oracle::random_irreducible(rng, n, trial % 3 == 0 ? 0.25 : 0.45);
    const TransitionMatrix a(rows);
    const bool prim = oracle::some_power_positive(rows, (n - 1) * (n - 1) + 1);
    CHECK(sft::is_primitive(a) == prim);
    CHECK((sft::class_period(a) == 1) == prim);
    const auto d = sft::cyclic_decomposition(a);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rows[i][j]) CHECK(d.class_of[j] == (d.class_of[i] + 1) % d.period);
  }
}

TEST_CASE("periodic point counts") {
  CHECK(sft::count_periodic_points(full2, 5) == 32);
  CHECK(sft::count_periodic_points(golden, 4) == 7);
  CHECK(sft::count_periodic_points(parity, 3) == 0);
  CHECK(sft::count_periodic_points(full2, 63) == (std::uint64_t{1} << 63));
  CHECK_THROWS_AS(sft::count_periodic_points(full2, 64), OverflowError);
}

TEST_CASE("trace formula agrees with brute-force cyclic word counts") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto rows = oracle::random_essential(rng, n, 0.5);
    const TransitionMatrix a(rows);
    for (std::size_t p = 1; p <= 12; ++p) CHECK(sft::count_periodic_points(a, p) == oracle::count_cyclic_words(rows, p));
  }
}

TEST_CASE("cycle enumeration") {
  auto words = [](const CycleEnumeration& e) {
    std::vector<Word> out;
    for (const auto& c : e.cycles) out.push_back(c.states);
    return out;
  };
  const auto g2 = sft::enumerate_cycles(golden, 2, 100);
  CHECK(words(g2) == std::vector<Word>{{0, 0}, {0, 1}});
  CHECK(g2.cycles[0].primitive_period == 1);
  CHECK(g2.cycles[1].primitive_period == 2);
  CHECK(words(sft::enumerate_cycles(full2, 1, 10)) == std::vector<Word>{{0}, {1}});
  CHECK(words(sft::enumerate_cycles(parity, 2, 10)) == std::vector<Word>{{0, 1}});
  const auto t = sft::enumerate_cycles(full2, 8, 5);
  CHECK(t.truncated);
  CHECK(t.cycles.size() == 5);
}

TEST_CASE("cycle enumeration: rotation classes account for every periodic point") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t size = 1 + trial % 4;
    const TransitionMatrix a(oracle::random_essential(rng, size, 0.5));
    for (std::size_t n = 1; n <= 10; ++n) {
      const auto par = sft::enumerate_cycles(a, n, 1'000'000);
      const auto ser = sft::enumerate_cycles_serial(a, n, 1'000'000);
      CHECK(par.cycles == ser.cycles);
      std::uint64_t points = 0;
      for (const auto& c : par.cycles) {
        CHECK(c.states == sft::minimal_rotation(c.states));
        CHECK(a.admissible_cyclic(c.states));
        points += c.primitive_period;
      }
      CHECK(points == sft::count_periodic_points(a, n));
      CHECK(std::is_sorted(par.cycles.begin(), par.cycles.end()));
    }
  }
}

TEST_CASE("entropy") {
  CHECK(sft::topological_entropy(full2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(sft::topological_entropy(golden) == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  CHECK(sft::topological_entropy(golden) == doctest::Approx(0.4812).epsilon(1e-4));
  CHECK(std::abs(sft::topological_entropy(TransitionMatrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}))) < 1e-12);
}

TEST_CASE("perron data satisfies the eigen equations") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = oracle::random_irreducible(rng, 2 + trial % 5, 0.4);
    const TransitionMatrix a(rows);
    const auto p = sft::perron(a);
    const std::size_t n = a.size();
    double dot = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0, ua = 0;
      for (std::size_t j = 0; j < n; ++j) {
        av += rows[i][j] * p.right[j];
        ua += p.left[j] * rows[j][i];
      }
      CHECK(av == doctest::Approx(p.root * p.right[i]).epsilon(1e-9));
      CHECK(ua == doctest::Approx(p.root * p.left[i]).epsilon(1e-9));
      dot += p.left[i] * p.right[i];
    }
    CHECK(dot == doctest::Approx(1.0));
  }
}

TEST_CASE("return time set examples") {
  std::vector<std::size_t> all(11);
  std::iota(all.begin(), all.end(), 0);
  CHECK(sft::return_time_set(full2, Word{0}, Word{0}, 10) == all);
  CHECK(sft::return_time_set(parity, Word{0}, Word{0}, 10) == std::vector<std::size_t>{0, 2, 4, 6, 8, 10});
  CHECK(sft::return_time_set(golden, Word{1}, Word{1}, 10) == std::vector<std::size_t>{0, 2, 3, 4, 5, 6, 7, 8, 9, 10});
}

TEST_CASE("return time sets agree with connecting-word search") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rows = oracle::random_irreducible(rng, 2 + trial % 3, 0.45);
    const TransitionMatrix a(rows);
    std::vector<Word> cyl;
    oracle::for_each_word(rows, 2, [&](const Word& w) { cyl.push_back(w); });
    const Word& u = cyl[trial % cyl.size()];
    const Word& v = cyl[(trial * 7 + 1) % cyl.size()];
    const auto got = sft::return_time_set(a, u, v, 10);
    const auto want = oracle::connecting_times(rows, u, v, 10);
    CHECK(std::set<std::size_t>(got.begin(), got.end()) == want);
  }
}

TEST_CASE("walks") {
  const auto w = sft::walk_of_length(golden, 1, 1, 3);
  REQUIRE(w);
  CHECK(*w == Word{1, 0, 0, 1});
  CHECK_FALSE(sft::walk_of_length(parity, 0, 0, 3));
  const auto s = sft::shortest_walk(golden, 1, 1, 1);
  REQUIRE(s);
  CHECK(*s == Word{1, 0, 1});
}

TEST_CASE("word utilities") {
  CHECK(sft::minimal_rotation(Word{1, 0, 1, 0, 0}) == Word{0, 0, 1, 0, 1});
  CHECK(sft::primitive_period(Word{0, 1, 0, 1}) == 2);
  CHECK(sft::primitive_period(Word{0, 0, 1}) == 3);
  CHECK(sft::has_cyclic_factor(Word{0, 0, 1}, Word{1, 0}));
  CHECK_FALSE(sft::has_cyclic_factor(Word{0, 1}, Word{0, 0}));
  CHECK(sft::admissible_words(golden, 2) == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}});
}

TEST_CASE("irreducible components of a block-diagonal matrix") {
  const TransitionMatrix a({{1, 1, 1, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}});
  const auto comps = sft::irreducible_components(a);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<std::size_t>{0, 1});
  CHECK(comps[1] == std::vector<std::size_t>{2, 3});
}

TEST_CASE("shift points and the cylinder metric") {
  const ShiftPoint p = ShiftPoint::periodic(Word{0, 1});
  CHECK(p.at(0) == 0);
  CHECK(p.at(1) == 1);
  CHECK(p.at(-1) == 1);
  CHECK(p.at(-2) == 0);
  CHECK(shift_distance(p, p) == 0.0);
  CHECK(shift_distance(p, p.shifted(2)) == 0.0);
  CHECK(shift_distance(p, p.shifted(1)) == 1.0);
  // Agrees with p on |i| < 3, differs at 3.
  const ShiftPoint q({1, 0}, {0, 1, 0, 0}, {1}, 0);
  CHECK(q.at(-1) == 0);
  CHECK(agreement_radius(p, q) == 1);
  const ShiftPoint r(Word{0, 1}, Word{0, 1, 0}, Word{0}, 0);
  CHECK(agreement_radius(p, r) == 3);
  CHECK(shift_distance(p, r) == 0.125);
  CHECK(p.window(-2, 4) == Word{0, 1, 0, 1});
}
