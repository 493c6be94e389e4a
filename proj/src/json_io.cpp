#include "mixkit/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mixkit/errors.hpp"

namespace mixkit::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw InvalidInput(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::string type_of(const Json& j) {
  const Json& t = field(j, "type");
  if (!t.is_string()) throw InvalidInput("field \"type\" must be a string");
  return t.get<std::string>();
}

IntMatrix2 int_matrix2(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("torus matrix must be 2x2");
  IntMatrix2 m{};
  for (std::size_t i = 0; i < 2; ++i) {
    if (!j[i].is_array() || j[i].size() != 2) throw InvalidInput("torus matrix must be 2x2");
    for (std::size_t k = 0; k < 2; ++k) {
      if (!j[i][k].is_number_integer()) throw InvalidInput("torus matrix entries must be integers");
      m[i][k] = j[i][k].get<std::int64_t>();
    }
  }
  return m;
}

Word periodic_word(const ShiftPoint& x) {
  const auto period = static_cast<std::int64_t>(x.right_tail().size());
  const Word w = x.window(0, static_cast<std::size_t>(period));
  const std::int64_t reach = std::max(x.end(), -x.begin()) + period;
  if (period == 0 || !(ShiftPoint::periodic(w).window(-reach, static_cast<std::size_t>(2 * reach)) ==
                       x.window(-reach, static_cast<std::size_t>(2 * reach))))
    throw InvalidInput("only periodic atoms can be serialized");
  return w;
}

void check_weights(const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw InvalidInput("atom weights must be non-negative");
    total += x;
  }
  if (w.empty() || std::abs(total - 1.0) > 1e-9) throw InvalidInput("atom weights must sum to 1");
}

}  // namespace

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

Word word_from_json(const Json& j) {
  Word w;
  if (j.is_string()) {
    for (char c : j.get<std::string>()) {
      if (c < '0' || c > '9') throw InvalidInput("word strings hold digits 0-9");
      w.push_back(static_cast<Symbol>(c - '0'));
    }
  } else if (j.is_array()) {
    for (const auto& s : j) {
      if (!s.is_number_integer() || s.get<long>() < 0 || s.get<long>() >= static_cast<long>(TransitionMatrix::kMaxSize))
        throw InvalidInput("word symbols must be integers in [0, 64)");
      w.push_back(static_cast<Symbol>(s.get<long>()));
    }
  } else {
    throw InvalidInput("a word is a digit string or an integer array");
  }
  if (w.empty()) throw InvalidInput("empty word");
  return w;
}

Json word_to_json(std::span<const Symbol> w) {
  Json j = Json::array();
  for (Symbol s : w) j.push_back(static_cast<int>(s));
  return j;
}

TransitionMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("matrix must be an array of rows");
  std::vector<std::vector<int>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw InvalidInput("matrix rows must be arrays");
    std::vector<int> row;
    for (const auto& x : r) {
      if (!x.is_number_integer()) throw InvalidInput("matrix entries must be 0 or 1");
      row.push_back(x.get<int>());
    }
    rows.push_back(std::move(row));
  }
  return TransitionMatrix(rows);
}

Json matrix_to_json(const TransitionMatrix& a) { return a.rows(); }

System system_from_json(const Json& j) {
  const std::string type = type_of(j);
  if (type == "sft") {
    if (j.contains("full_shift")) {
      const Json& k = j.at("full_shift");
      if (!k.is_number_integer() || k.get<long>() < 1 || k.get<long>() > 64) throw InvalidInput("full_shift must be in [1, 64]");
      return TransitionMatrix::full_shift(k.get<std::size_t>());
    }
    return matrix_from_json(field(j, "matrix"));
  }
  if (type == "torus") return ToralAutomorphism(int_matrix2(field(j, "matrix")));
  if (type == "horseshoe") return Horseshoe(number(j, "contraction"), number(j, "expansion"));
  throw InvalidInput("unknown system type \"" + type + "\"");
}

Json system_to_json(const System& s) {
  return std::visit(
      [](const auto& sys) -> Json {
        using T = std::decay_t<decltype(sys)>;
        if constexpr (std::is_same_v<T, TransitionMatrix>) {
          return Json{{"type", "sft"}, {"matrix", matrix_to_json(sys)}};
        } else if constexpr (std::is_same_v<T, ToralAutomorphism>) {
          const auto& m = sys.matrix();
          return Json{{"type", "torus"}, {"matrix", {{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}}};
        } else {
          return Json{{"type", "horseshoe"}, {"contraction", sys.contraction()}, {"expansion", sys.expansion()}};
        }
      },
      s);
}

Measure measure_from_json(const Json& j, const TransitionMatrix* ambient) {
  const std::string type = type_of(j);
  if (type == "cycle") return cycle_measure(word_from_json(field(j, "word")));
  if (type == "periodic_mixture") {
    ShiftAtoms mu;
    double total = 0.0;
    for (const auto& c : field(j, "components")) {
      const Word w = word_from_json(field(c, "word"));
      const double weight = number(c, "weight");
      if (!(weight > 0.0)) throw InvalidInput("mixture weights must be positive");
      total += weight;
      const auto part = cycle_measure(w);
      for (std::size_t k = 0; k < part.points.size(); ++k) {
        mu.points.push_back(part.points[k]);
        mu.weights.push_back(weight * part.weights[k]);
      }
    }
    if (mu.points.empty() || std::abs(total - 1.0) > 1e-12) throw InvalidInput("mixture weights must sum to 1");
    return mu;
  }
  if (type == "shift_atoms") {
    ShiftAtoms mu;
    for (const auto& a : field(j, "atoms")) {
      mu.points.push_back(ShiftPoint::periodic(word_from_json(field(a, "word"))));
      mu.weights.push_back(number(a, "weight"));
    }
    check_weights(mu.weights);
    return mu;
  }
  if (type == "bernoulli") return bernoulli_measure(field(j, "p").get<std::vector<double>>());
  if (type == "parry") {
    if (j.contains("matrix")) return parry_measure(matrix_from_json(j.at("matrix")));
    if (!ambient) throw InvalidInput("parry target needs a matrix");
    return parry_measure(*ambient);
  }
  if (type == "markov") {
    MarkovMeasure mu{matrix_from_json(field(j, "support")), field(j, "P").get<std::vector<std::vector<double>>>(),
                     field(j, "pi").get<std::vector<double>>(), {}};
    if (j.contains("labels")) mu.labels = word_from_json(j.at("labels"));
    const std::size_t n = mu.support.size();
    if (mu.p.size() != n || mu.pi.size() != n) throw InvalidInput("Markov measure dimensions do not match the support");
    for (std::size_t i = 0; i < n; ++i) {
      if (mu.p[i].size() != n) throw InvalidInput("P must be square");
      for (std::size_t k = 0; k < n; ++k)
        if (mu.p[i][k] > 0.0 && !mu.support(i, k)) throw InvalidInput("P charges a forbidden transition");
    }
    return mu;
  }
  if (type == "lebesgue") return Lebesgue{};
  if (type == "torus_atoms") {
    TorusAtoms mu;
    for (const auto& a : field(j, "atoms")) {
      const auto pt = field(a, "point").get<std::vector<double>>();
      if (pt.size() != 2) throw InvalidInput("torus points have two coordinates");
      mu.points.push_back(wrap({pt[0], pt[1]}));
      mu.weights.push_back(number(a, "weight"));
    }
    check_weights(mu.weights);
    return mu;
  }
  throw InvalidInput("unknown measure type \"" + type + "\"");
}

Json measure_to_json(const Measure& mu) {
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ShiftAtoms>) {
          Json atoms = Json::array();
          for (std::size_t k = 0; k < m.points.size(); ++k)
            atoms.push_back({{"word", word_to_json(periodic_word(m.points[k]))}, {"weight", m.weights[k]}});
          return Json{{"type", "shift_atoms"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<T, TorusAtoms>) {
          Json atoms = Json::array();
          for (std::size_t k = 0; k < m.points.size(); ++k)
            atoms.push_back({{"point", {m.points[k].x, m.points[k].y}}, {"weight", m.weights[k]}});
          return Json{{"type", "torus_atoms"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<T, MarkovMeasure>) {
          Json j{{"type", "markov"}, {"support", matrix_to_json(m.support)}, {"P", m.p}, {"pi", m.pi}};
          if (!m.labels.empty()) j["labels"] = word_to_json(m.labels);
          return j;
        } else {
          return Json{{"type", "lebesgue"}};
        }
      },
      mu);
}

Json certificate_to_json(const LppResult& r) {
  if (const auto* c = std::get_if<LppCertificate>(&r)) {
    Json w = Json::array();
    for (const auto& [n, wit] : c->witnesses)
      w.push_back({{"n", n}, {"word", word_to_json(wit.word)}, {"primitive_period", wit.primitive_period}, {"route", wit.route}});
    return Json{{"kind", "certificate"}, {"epsilon", c->epsilon}, {"m", c->m},          {"n0", c->n0},
                {"n_max", c->n_max},     {"covering_length", c->covering_length}, {"alphabet", c->alphabet},
                {"witnesses", w}};
  }
  const auto& f = std::get<LppRefutation>(r);
  return Json{{"kind", "refutation"}, {"epsilon", f.epsilon},     {"m", f.m},
              {"blocking_n", f.blocking_n}, {"exhaustive", f.exhaustive}, {"reason", f.reason}};
}

Json excursion_to_json(const ExcursionParameters& e) {
  return Json{{"tau", e.tau},           {"N", e.n_big},   {"l", e.l},   {"k_r", e.k_r},
              {"L", e.big_l},           {"n0_product", e.n0_product}, {"n0", e.n0},
              {"n0_empirical", e.n0_empirical}};
}

Json orbit_to_json(const std::vector<Vec2>& points) {
  Json j = Json::array();
  for (const Vec2& p : points) j.push_back({p.x, p.y});
  return j;
}

Json orbit_to_json(const std::vector<ShiftPoint>& points) {
  Word w;
  for (const auto& x : points) w.push_back(x.at(0));
  return word_to_json(w);
}

}  // namespace mixkit::io
