#include "doctest.h"
#include "mixkit/errors.hpp"
#include "mixkit/json_io.hpp"

using namespace mixkit;
using io::Json;

TEST_CASE("words") {
  CHECK(io::word_from_json(Json("0110")) == Word{0, 1, 1, 0});
  CHECK(io::word_from_json(Json::parse("[3, 12]")) == Word{3, 12});
  CHECK(io::word_to_json(Word{1, 0}) == Json::parse("[1, 0]"));
  CHECK_THROWS_AS(io::word_from_json(Json("")), InvalidInput);
  CHECK_THROWS_AS(io::word_from_json(Json("0a")), InvalidInput);
  CHECK_THROWS_AS(io::word_from_json(Json::parse("[64]")), InvalidInput);
  CHECK_THROWS_AS(io::word_from_json(Json(3)), InvalidInput);
}

TEST_CASE("systems round-trip") {
  for (const char* text : {R"({"type":"sft","matrix":[[1,1],[1,0]]})", R"({"type":"torus","matrix":[[2,1],[1,1]]})",
                           R"({"type":"horseshoe","contraction":0.25,"expansion":3.5})"}) {
    const Json j = Json::parse(text);
    CHECK(io::system_to_json(io::system_from_json(j)) == j);
  }
  const auto full = io::system_from_json(Json::parse(R"({"type":"sft","full_shift":3})"));
  CHECK(std::get<TransitionMatrix>(full).size() == 3);
}

TEST_CASE("invalid systems") {
  for (const char* text : {R"({"matrix":[[1]]})", R"({"type":"sft"})", R"({"type":"sft","matrix":[[1,1],[0,0]]})",
                           R"({"type":"sft","matrix":[[1,2],[1,1]]})", R"({"type":"torus","matrix":[[1,1],[0,1]]})",
                           R"({"type":"torus","matrix":[[2,1],[1]]})", R"({"type":"horseshoe","contraction":0.6,"expansion":3})",
                           R"({"type":"sft","full_shift":0})", R"({"type":"circle"})"})
    CHECK_THROWS_AS(io::system_from_json(Json::parse(text)), InvalidInput);
}

TEST_CASE("measures") {
  const auto cyc = io::measure_from_json(Json::parse(R"({"type":"cycle","word":"011"})"));
  const auto& atoms = std::get<ShiftAtoms>(cyc);
  CHECK(atoms.points.size() == 3);
  for (double w : atoms.weights) CHECK(w == doctest::Approx(1.0 / 3.0));

  const auto mix = io::measure_from_json(Json::parse(
      R"({"type":"periodic_mixture","components":[{"word":"0","weight":0.25},{"word":"01","weight":0.75}]})"));
  const auto& m = std::get<ShiftAtoms>(mix);
  REQUIRE(m.points.size() == 3);
  CHECK(m.weights[0] == doctest::Approx(0.25));
  CHECK(m.weights[1] == doctest::Approx(0.375));

  CHECK_THROWS_AS(io::measure_from_json(Json::parse(
                      R"({"type":"periodic_mixture","components":[{"word":"0","weight":0.5}]})")),
                  InvalidInput);
  CHECK_THROWS_AS(io::measure_from_json(Json::parse(R"({"type":"parry"})")), InvalidInput);

  const TransitionMatrix golden({{1, 1}, {1, 0}});
  const auto parry = io::measure_from_json(Json::parse(R"({"type":"parry"})"), &golden);
  const auto& mk = std::get<MarkovMeasure>(parry);
  CHECK(mk.p[1][0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(io::measure_from_json(Json::parse(
                      R"({"type":"markov","support":[[1,1],[1,0]],"P":[[0.5,0.5],[0.5,0.5]],"pi":[0.5,0.5]})")),
                  InvalidInput);
}

TEST_CASE("measures round-trip through their serialized form") {
  const TransitionMatrix golden({{1, 1}, {1, 0}});
  const std::vector<Measure> measures{cycle_measure(Word{0, 0, 1}), parry_measure(golden), Lebesgue{}};
  const auto family = cylinder_family(2, 3);
  for (const auto& mu : measures) {
    const Json j = io::measure_to_json(mu);
    const Measure back = io::measure_from_json(j);
    CHECK(io::measure_to_json(back) == j);
    if (!std::holds_alternative<Lebesgue>(mu)) CHECK(weak_star_distance(mu, back, family) < 1e-15);
  }
}

TEST_CASE("certificates and refutations serialize") {
  const auto cert = io::certificate_to_json(lpp::lpp_certificate(TransitionMatrix::full_shift(2), 0.5, 10));
  CHECK(cert["kind"] == "certificate");
  CHECK(cert["n0"] == 2);
  CHECK(cert["witnesses"].size() == 9);
  const auto refute = io::certificate_to_json(lpp::lpp_certificate(TransitionMatrix({{0, 1}, {1, 0}}), 0.25, 10));
  CHECK(refute["kind"] == "refutation");
}
