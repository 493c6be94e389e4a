#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/homoclinic.hpp"
#include "mixkit/json_io.hpp"
#include "mixkit/lpp.hpp"
#include "mixkit/measure.hpp"
#include "mixkit/shadowing.hpp"
#include "mixkit/version.hpp"

using namespace mixkit;
using io::Json;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kPrecondition = 3, kNumerical = 4 };

struct Report {
  Json result;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

std::string cell(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s;
    for (const auto& x : j) s += x.is_number_integer() ? std::to_string(x.get<long>()) : x.dump();
    return s;
  }
  return j.dump();
}

std::string word_string(std::span<const Symbol> w) {
  std::string s;
  for (Symbol x : w) s += x < 10 ? std::string(1, static_cast<char>('0' + x)) : "(" + std::to_string(x) + ")";
  return s;
}

// "system" / "target" may be inline objects or paths to JSON files.
Json resolve_document(const Json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg.at(key).is_null()) throw InvalidInput(std::string("no ") + key + " given");
  const Json& v = cfg.at(key);
  if (v.is_string()) return io::read_json(v.get<std::string>());
  if (v.is_object()) return v;
  throw InvalidInput(std::string(key) + " must be a path or an object");
}

TransitionMatrix require_sft(const io::System& s, const char* command) {
  if (const auto* a = std::get_if<TransitionMatrix>(&s)) return *a;
  throw InvalidInput(std::string(command) + " needs an sft system");
}

Report analyze(const Json& cfg) {
  const auto a = require_sft(io::system_from_json(resolve_document(cfg, "system")), "analyze");
  const auto max_period = cfg.at("max_period").get<std::size_t>();
  Report r;
  const bool irreducible = sft::is_irreducible(a);
  r.result["size"] = a.size();
  r.result["irreducible"] = irreducible;
  r.result["primitive"] = sft::is_primitive(a);
  r.result["class_period"] = irreducible ? Json(sft::class_period(a)) : Json(nullptr);
  r.result["decomposition"] = irreducible ? Json(sft::cyclic_decomposition(a).classes) : Json(nullptr);
  r.result["components"] = sft::irreducible_components(a);
  r.result["entropy"] = sft::topological_entropy(a);
  Json counts = Json::array();
  r.csv_header = {"n", "fixed_points"};
  for (std::size_t n = 1; n <= max_period; ++n) {
    Json c{{"n", n}};
    try {
      c["fixed_points"] = sft::count_periodic_points(a, n);
    } catch (const OverflowError&) {
      c["fixed_points"] = nullptr;
    }
    r.csv_rows.push_back({std::to_string(n), cell(c["fixed_points"])});
    counts.push_back(c);
  }
  r.result["periodic_counts"] = counts;
  return r;
}

// SFT systems as given; the horseshoe through its coding by the full 2-shift.
TransitionMatrix symbolic_model(const io::System& s) {
  if (const auto* a = std::get_if<TransitionMatrix>(&s)) return *a;
  if (std::holds_alternative<Horseshoe>(s)) return TransitionMatrix::full_shift(2);
  throw InvalidInput("LPP certificates are computed on symbolic systems and the horseshoe coding");
}

Report lpp_command(const Json& cfg) {
  const auto a = symbolic_model(io::system_from_json(resolve_document(cfg, "system")));
  const auto result = lpp::lpp_certificate(a, cfg.at("epsilon").get<double>(), cfg.at("n_max").get<std::size_t>());
  Report r;
  r.result = io::certificate_to_json(result);
  r.csv_header = {"n", "word", "primitive_period", "route"};
  if (const auto* c = std::get_if<LppCertificate>(&result))
    for (const auto& [n, w] : c->witnesses)
      r.csv_rows.push_back({std::to_string(n), word_string(w.word), std::to_string(w.primitive_period), w.route});
  return r;
}

template <class S>
void shadow_rows(Report& r, const S& sys, const HomoclinicDatum<typename S::Point>& d, const ExcursionParameters& e,
                 double delta, std::int64_t n_from, std::int64_t n_to, double constant, double same_tol) {
  const auto ref = homoclinic::reference_set(d, e);
  const double eps = constant * delta;
  Json rows = Json::array();
  r.csv_header = {"n", "defect", "residual", "shadow_distance", "bound", "fixed_point_error", "smallest_period",
                  "covering_radius", "dense_3eps", "pass"};
  bool all = true;
  for (std::int64_t n = n_from; n <= n_to; ++n) {
    const auto po = homoclinic::build_periodic_pseudo_orbit(sys, d, e, n);
    const auto check = homoclinic::verify_pseudo_orbit(sys, po, delta, ref, same_tol);
    const auto o = shadow_periodic(sys, po);
    const auto dense = density_check(sys, o.points, ref, 3 * eps);
    const bool pass = check.within_delta && check.exact_period_ok && o.residual <= 1e-10 &&
                      o.shadow_distance <= constant * po.defect && o.fixed_point_error <= 1e-10 && dense.dense;
    all = all && pass;
    Json row{{"n", n},
             {"defect", po.defect},
             {"residual", o.residual},
             {"shadow_distance", o.shadow_distance},
             {"bound", constant * po.defect},
             {"fixed_point_error", o.fixed_point_error},
             {"smallest_period", o.smallest_period},
             {"covering_radius", dense.covering_radius},
             {"dense_3eps", dense.dense},
             {"pass", pass}};
    std::vector<std::string> line;
    for (const auto& [k, v] : row.items()) line.push_back(cell(v));
    r.csv_rows.push_back(line);
    rows.push_back(row);
  }
  r.result["shadowing_constant"] = constant;
  r.result["epsilon"] = eps;
  r.result["rows"] = rows;
  r.result["all_pass"] = all;
}

Report pseudo_shadow(const Json& cfg) {
  const auto system = io::system_from_json(resolve_document(cfg, "system"));
  const bool toral = std::holds_alternative<ToralAutomorphism>(system);
  const double delta = cfg.at("delta").is_null() ? (toral ? 0.01 : 0.125) : cfg.at("delta").get<double>();
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  Report r;
  auto range = [&](const ExcursionParameters& e) {
    const std::int64_t from = cfg.at("n_from").is_null() ? e.n0 : cfg.at("n_from").get<std::int64_t>();
    const std::int64_t to = cfg.at("n_to").is_null() ? from + 30 : cfg.at("n_to").get<std::int64_t>();
    if (to < from) throw InvalidInput("n_to is below n_from");
    return std::pair{from, to};
  };
  if (const auto* f = std::get_if<ToralAutomorphism>(&system)) {
    const Json& pt = cfg.at("point");
    if (!pt.is_array() || pt.size() != 3) throw InvalidInput("torus orbits are given by a point [x, y, den]");
    RationalPoint p{pt[0].get<std::int64_t>(), pt[1].get<std::int64_t>(), pt[2].get<std::int64_t>()};
    if (p.den <= 0 || p.x < 0 || p.y < 0 || p.x >= p.den || p.y >= p.den) throw InvalidInput("point must lie in [0,1)^2");
    std::vector<RationalPoint> orbit{p};
    for (RationalPoint x = f->evaluate_exact(p); !(x == p); x = f->evaluate_exact(x)) {
      orbit.push_back(x);
      if (orbit.size() > 10'000) throw InvalidInput("orbit of the point is longer than 10^4");
    }
    const auto h = toral_homoclinic_point(*f, orbit);
    auto make = [&](std::int64_t b, std::int64_t fw) { return toral_datum(*f, h, delta, b, fw); };
    auto d = fitted_datum<ToralAutomorphism>(*f, make);
    auto e = homoclinic::compute_excursion_parameters(*f, d);
    const auto [from, to] = range(e);
    d = fitted_datum<ToralAutomorphism>(*f, make, std::max<std::int64_t>(0, to - e.n0));
    e = homoclinic::compute_excursion_parameters(*f, d);
    r.result["orbit_p"] = io::orbit_to_json(d.orbit_p);
    r.result["homoclinic"] = {{"t", h.t}, {"s", h.s}, {"deck", h.deck}};
    r.result["excursion"] = io::excursion_to_json(e);
    shadow_rows(r, *f, d, e, delta, from, to, f->hyperbolicity().shadowing_constant(), 1e-12);
    return r;
  }
  if (const auto* a = std::get_if<TransitionMatrix>(&system)) {
    const Word p = io::word_from_json(cfg.at("word"));
    const ShiftSystem sys(*a);
    const auto h = symbolic_homoclinic_point(*a, p);
    auto make = [&](std::int64_t b, std::int64_t fw) { return symbolic_datum(h, delta, b, fw); };
    auto d = fitted_datum<ShiftSystem>(sys, make);
    auto e = homoclinic::compute_excursion_parameters(sys, d);
    const auto [from, to] = range(e);
    d = fitted_datum<ShiftSystem>(sys, make, std::max<std::int64_t>(0, to - e.n0));
    e = homoclinic::compute_excursion_parameters(sys, d);
    r.result["orbit_p"] = io::word_to_json(p);
    r.result["splice"] = io::word_to_json(h.splice);
    r.result["excursion_block"] = io::word_to_json(h.excursion);
    r.result["excursion"] = io::excursion_to_json(e);
    shadow_rows(r, sys, d, e, delta, from, to, 1.0, 0.0);
    return r;
  }
  throw InvalidInput("pseudo-shadow supports torus and sft systems");
}

Report approx_measure(const Json& cfg) {
  const auto system = io::system_from_json(resolve_document(cfg, "system"));
  const Json target_doc = resolve_document(cfg, "target");
  const std::string target_id = target_doc.value("id", target_doc.value("type", std::string("target")));
  const double eps = cfg.at("epsilon").get<double>();
  const std::string mode = cfg.at("mode").get<std::string>();
  if (mode != "periodic" && mode != "bernoulli") throw InvalidInput("mode is periodic or bernoulli");
  PeriodicSearchOptions popt;
  popt.max_period = cfg.at("max_period").get<std::size_t>();
  Report r;
  r.csv_header = {"target_id", "method", "parameter", "distance"};
  if (const auto* f = std::get_if<ToralAutomorphism>(&system)) {
    if (mode != "periodic") throw InvalidInput("bernoulli mode needs an sft system");
    const auto family = mode_family(cfg.at("modes").get<int>());
    const Measure target = io::measure_from_json(target_doc);
    const auto best = approximate_by_periodic(target, *f, eps, family, popt);
    r.result = {{"family", family.description}, {"method", "periodic"}, {"period", best.period},
                {"orbit", io::orbit_to_json(best.orbit)}, {"distance", best.distance}, {"within", best.within},
                {"candidates_scanned", best.candidates_scanned}, {"measure", io::measure_to_json(best.measure)}};
    r.csv_rows.push_back({target_id, "periodic", std::to_string(best.period), Json(best.distance).dump()});
    return r;
  }
  const auto a = require_sft(system, "approx-measure");
  const auto family = cylinder_family(a.size(), cfg.at("depth").get<std::size_t>());
  const Measure target = io::measure_from_json(target_doc, &a);
  if (mode == "periodic") {
    const auto best = approximate_by_periodic(target, a, eps, family, popt);
    r.result = {{"family", family.description}, {"method", "periodic"}, {"source", best.source},
                {"word", io::word_to_json(best.word)}, {"period", best.period}, {"distance", best.distance},
                {"within", best.within}, {"candidates_scanned", best.candidates_scanned},
                {"measure", io::measure_to_json(best.measure)}};
    r.csv_rows.push_back({target_id, "periodic", std::to_string(best.period), Json(best.distance).dump()});
    return r;
  }
  if (!sft::is_primitive(a)) throw InvalidInput("bernoulli mode needs a primitive (mixing) support");
  BernoulliOptions bopt;
  bopt.periodic = popt;
  bopt.m_max = cfg.at("m_max").get<std::size_t>();
  bopt.full_scan = cfg.at("full_scan").get<bool>();
  const Word p = cfg.at("word").is_null() ? Word{} : io::word_from_json(cfg.at("word"));
  const auto b = bernoulli_approximation(target, a, p, eps, family, bopt);
  Json scan = Json::array();
  for (const auto& s : b.scan) {
    scan.push_back({{"m", s.m}, {"primitive", s.primitive}, {"distance_to_periodic", s.distance_to_periodic},
                    {"distance_to_target", s.distance_to_target}});
    if (s.primitive)
      r.csv_rows.push_back({target_id, "bernoulli", std::to_string(s.m), Json(s.distance_to_target).dump()});
  }
  r.csv_rows.insert(r.csv_rows.begin(), {target_id, "periodic", word_string(b.p), Json(b.periodic_distance).dump()});
  r.result = {{"family", family.description},
              {"method", "bernoulli"},
              {"p", io::word_to_json(b.p)},
              {"periodic_distance", b.periodic_distance},
              {"excursion_block", io::word_to_json(b.excursion)},
              {"m", b.m},
              {"distance_to_periodic", b.distance_to_periodic},
              {"distance", b.distance_to_target},
              {"within", b.within},
              {"support_primitive", sft::is_primitive(b.block_support)},
              {"entropy", b.measure->entropy()},
              {"scan", scan},
              {"measure", io::measure_to_json(*b.measure)}};
  return r;
}

Json realize_witnesses(const Horseshoe& h, const LppCertificate& c) {
  double worst = 0.0;
  bool itineraries = true;
  for (const auto& [n, w] : c.witnesses) {
    Word rot = w.word;
    std::vector<Vec2> orbit;
    for (std::size_t i = 0; i < rot.size(); ++i) {
      orbit.push_back(h.periodic_point(rot));
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      worst = std::max(worst, h.distance(h.evaluate(orbit[i]), orbit[(i + 1) % orbit.size()]));
      // strip membership up to rounding; boundary points such as y = 1 land a few ulps outside
      const double y = orbit[i].y, lo = 1.0 / h.expansion();
      const Symbol b = y < 0.5 ? 0 : 1;
      const bool inside = b == 0 ? (y > -1e-12 && y < lo + 1e-12) : (y > 1.0 - lo - 1e-12 && y < 1.0 + 1e-12);
      itineraries = itineraries && inside && b == w.word[i];
    }
  }
  return {{"orbits", c.witnesses.size()}, {"max_residual", worst}, {"itineraries_match", itineraries}};
}

Report perturb_smoke(const Json& cfg) {
  const auto system = io::system_from_json(resolve_document(cfg, "system"));
  const auto* base = std::get_if<Horseshoe>(&system);
  if (!base) throw InvalidInput("perturb-smoke runs on a horseshoe system");
  const double mag = cfg.at("magnitude").get<double>();
  double c2 = base->contraction() * (1.0 + mag), e2 = base->expansion() * (1.0 - mag);
  if (!cfg.at("perturbed").is_null()) {
    c2 = cfg.at("perturbed").at("contraction").get<double>();
    e2 = cfg.at("perturbed").at("expansion").get<double>();
  }
  if (!(c2 > 0.0 && c2 < 0.5 && e2 > 2.0))
    throw InvalidInput("perturbation leaves the hyperbolicity margin (need 0 < c < 1/2, e > 2)");
  const Horseshoe moved(c2, e2);
  const double eps = cfg.at("epsilon").get<double>();
  const auto n_max = cfg.at("n_max").get<std::size_t>();
  const auto coding = TransitionMatrix::full_shift(2);
  Report r;
  r.csv_header = {"model", "contraction", "expansion", "n0", "orbits", "max_residual", "itineraries_match"};
  Json runs = Json::array();
  std::optional<std::size_t> n0s[2];
  int k = 0;
  for (const Horseshoe* h : {base, &moved}) {
    const auto result = lpp::lpp_certificate(coding, eps, n_max);
    const auto& cert = lpp::expect_certificate(result);
    const Json real = realize_witnesses(*h, cert);
    n0s[k] = cert.n0;
    Json run{{"model", k == 0 ? "original" : "perturbed"},
             {"contraction", h->contraction()},
             {"expansion", h->expansion()},
             {"n0", cert.n0},
             {"m", cert.m},
             {"realized", real}};
    r.csv_rows.push_back({run["model"], cell(run["contraction"]), cell(run["expansion"]), std::to_string(cert.n0),
                          cell(real["orbits"]), cell(real["max_residual"]), cell(real["itineraries_match"])});
    runs.push_back(run);
    ++k;
  }
  r.result = {{"runs", runs}, {"same_n0", n0s[0] == n0s[1]}};
  return r;
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

void emit(const Report& r, const Json& cfg, const std::string& command, const std::string& format,
          const std::string& out_dir) {
  std::ostringstream text;
  if (format == "csv") {
    for (std::size_t i = 0; i < r.csv_header.size(); ++i) text << (i ? "," : "") << r.csv_header[i];
    text << "\n";
    for (const auto& row : r.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) text << (i ? "," : "") << row[i];
      text << "\n";
    }
  } else {
    Json versions{{"mixkit", kVersion}};
    for (const auto& m : kModuleVersions) versions[m.name] = m.version;
    Json report{{"command", command}, {"versions", versions}, {"config", cfg}, {"result", r.result}};
    text << report.dump(2) << "\n";
  }
  if (out_dir.empty()) {
    std::cout << text.str();
    return;
  }
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / (command + (format == "csv" ? ".csv" : ".json"));
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixkit: mixing, shadowing and measure approximation for symbolic and hyperbolic systems"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format = "json";
  long seed = 0;
  app.add_option("--config", config_path, "JSON file with command parameters");
  app.add_option("--out", out_dir, "directory for the report (default: stdout)");
  app.add_option("--seed", seed, "seed recorded in the report; all commands are deterministic");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // defaults per command; config file entries and flags override them
  std::map<std::string, Json> defaults{
      {"analyze", {{"system", nullptr}, {"max_period", 10}}},
      {"lpp", {{"system", nullptr}, {"epsilon", 0.25}, {"n_max", 100}}},
      {"pseudo-shadow",
       {{"system", nullptr}, {"point", nullptr}, {"word", nullptr}, {"delta", nullptr}, {"n_from", nullptr}, {"n_to", nullptr}}},
      {"approx-measure",
       {{"system", nullptr}, {"target", nullptr}, {"epsilon", 0.1}, {"mode", "periodic"}, {"depth", 3}, {"modes", 3},
        {"max_period", 12}, {"word", nullptr}, {"m_max", 0}, {"full_scan", true}}},
      {"perturb-smoke",
       {{"system", nullptr}, {"magnitude", 0.02}, {"perturbed", nullptr}, {"epsilon", 0.25}, {"n_max", 60}}},
  };
  std::map<std::string, Json> flags;
  auto str_opt = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(name, [&flags, sub, key](const std::string& v) { flags[sub->get_name()][key] = v; }, help);
  };
  auto num_opt = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<double>(name, [&flags, sub, key](double v) { flags[sub->get_name()][key] = v; }, help);
  };
  auto int_opt = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<long>(name, [&flags, sub, key](long v) { flags[sub->get_name()][key] = v; }, help);
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "irreducibility, period, decomposition, entropy, periodic counts");
  str_opt(analyze_cmd, "system", "system", "system JSON file");
  int_opt(analyze_cmd, "--max-period", "max_period", "periodic counts for n = 1..N");

  auto* lpp_cmd = app.add_subcommand("lpp", "large periods certificate or refutation");
  str_opt(lpp_cmd, "system", "system", "system JSON file");
  num_opt(lpp_cmd, "--epsilon", "epsilon", "density scale (m = smallest with 2^-m <= epsilon)");
  int_opt(lpp_cmd, "--n-max", "n_max", "largest period checked");

  auto* ps_cmd = app.add_subcommand("pseudo-shadow", "homoclinic pseudo-orbits and their shadows, per period");
  str_opt(ps_cmd, "system", "system", "system JSON file");
  str_opt(ps_cmd, "--word", "word", "periodic word p (sft systems)");
  ps_cmd->add_option_function<std::vector<long>>(
      "--point", [&flags](const std::vector<long>& v) { flags["pseudo-shadow"]["point"] = v; },
      "periodic point x y den (torus systems)")
      ->expected(3);
  num_opt(ps_cmd, "--delta", "delta", "pseudo-orbit defect scale");
  int_opt(ps_cmd, "--n-from", "n_from", "first period (default N0)");
  int_opt(ps_cmd, "--n-to", "n_to", "last period (default n_from + 30)");

  auto* am_cmd = app.add_subcommand("approx-measure", "approximate a target measure by periodic or Markov measures");
  str_opt(am_cmd, "target", "target", "target measure JSON file");
  str_opt(am_cmd, "system", "system", "system JSON file");
  num_opt(am_cmd, "--epsilon", "epsilon", "weak-* tolerance");
  str_opt(am_cmd, "--mode", "mode", "periodic or bernoulli");
  int_opt(am_cmd, "--depth", "depth", "cylinder depth of the test family (sft)");
  int_opt(am_cmd, "--modes", "modes", "largest |k| of the Fourier family (torus)");
  int_opt(am_cmd, "--max-period", "max_period", "longest cycle scanned");
  str_opt(am_cmd, "--word", "word", "periodic word for the block chain (bernoulli mode)");
  int_opt(am_cmd, "--m-max", "m_max", "largest block exponent (0: fill 64 states)");

  auto* ps2_cmd = app.add_subcommand("perturb-smoke", "LPP certificates before/after perturbing horseshoe rates");
  str_opt(ps2_cmd, "system", "system", "horseshoe system JSON file");
  num_opt(ps2_cmd, "--magnitude", "magnitude", "relative change: c(1+m), e(1-m)");
  num_opt(ps2_cmd, "--epsilon", "epsilon", "density scale of the certificates");
  int_opt(ps2_cmd, "--n-max", "n_max", "largest period checked");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Json cfg = defaults.at(command);
    if (!config_path.empty()) {
      const Json file = io::read_json(config_path);
      if (!file.is_object()) throw InvalidInput("config must be a JSON object");
      for (const auto& [k, v] : file.items()) {
        if (!cfg.contains(k)) throw InvalidInput("unknown config key \"" + k + "\" for " + command);
        cfg[k] = v;
        // document paths inside a config are relative to the config file
        if ((k == "system" || k == "target") && v.is_string() && std::filesystem::path(v.get<std::string>()).is_relative())
          cfg[k] = (std::filesystem::path(config_path).parent_path() / v.get<std::string>()).lexically_normal().string();
      }
    }
    merge(cfg, flags[command]);
    cfg["seed"] = seed;
    cfg["format"] = format;
    Report r;
    if (command == "analyze") r = analyze(cfg);
    else if (command == "lpp") r = lpp_command(cfg);
    else if (command == "pseudo-shadow") r = pseudo_shadow(cfg);
    else if (command == "approx-measure") r = approx_measure(cfg);
    else r = perturb_smoke(cfg);
    emit(r, cfg, command, format, out_dir);
    return kOk;
  } catch (const InvalidInput& e) {
    std::cerr << "mixkit: invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const Json::exception& e) {
    std::cerr << "mixkit: invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "mixkit: precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const NumericalError& e) {
    std::cerr << "mixkit: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "mixkit: " << e.what() << "\n";
    return kNumerical;
  }
}
