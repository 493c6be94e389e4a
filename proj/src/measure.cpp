#include "mixkit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mixkit/errors.hpp"

namespace mixkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool matches(const ShiftPoint& x, std::span<const Symbol> word) {
  for (std::size_t i = 0; i < word.size(); ++i)
    if (x.at(static_cast<std::int64_t>(i)) != word[i]) return false;
  return true;
}

std::complex<double> character(const Mode& k, Vec2 x) {
  const double phase = 2.0 * std::numbers::pi * (k.k1 * x.x + k.k2 * x.y);
  return {std::cos(phase), std::sin(phase)};
}

[[noreturn]] void unsupported(const char* what) { throw InvalidInput(std::string("cannot integrate ") + what); }

// Forward probabilities of emitting `word` from time 0, indexed by the final state.
std::vector<double> forward_mass(const MarkovMeasure& mu, std::span<const Symbol> word) {
  const std::size_t s = mu.pi.size();
  std::vector<double> cur(s, 0.0), next(s);
  for (std::size_t i = 0; i < s; ++i)
    if (mu.label(i) == word[0]) cur[i] = mu.pi[i];
  for (std::size_t t = 1; t < word.size(); ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      if (cur[i] == 0.0) continue;
      for (std::size_t j = 0; j < s; ++j)
        if (mu.label(j) == word[t]) next[j] += cur[i] * mu.p[i][j];
    }
    cur.swap(next);
  }
  return cur;
}

// beta_i = probability of emitting `word` starting in state i.
std::vector<double> backward_mass(const MarkovMeasure& mu, std::span<const Symbol> word) {
  const std::size_t s = mu.pi.size();
  std::vector<double> cur(s, 0.0), prev(s);
  for (std::size_t i = 0; i < s; ++i) cur[i] = mu.label(i) == word.back() ? 1.0 : 0.0;
  for (std::size_t t = word.size() - 1; t-- > 0;) {
    for (std::size_t i = 0; i < s; ++i) {
      prev[i] = 0.0;
      if (mu.label(i) != word[t]) continue;
      for (std::size_t j = 0; j < s; ++j) prev[i] += mu.p[i][j] * cur[j];
    }
    cur.swap(prev);
  }
  return cur;
}

// Periodic components (minimal rotation, total weight) of a measure on periodic points.
std::vector<std::pair<Word, double>> periodic_components(const ShiftAtoms& mu) {
  std::map<Word, double> comp;
  for (std::size_t k = 0; k < mu.points.size(); ++k) {
    const ShiftPoint& x = mu.points[k];
    const Word& tail = x.right_tail();
    if (tail.empty()) return {};
    const Word w = x.window(0, tail.size());
    if (!(ShiftPoint::periodic(w).window(-64, 128) == x.window(-64, 128))) return {};
    comp[sft::minimal_rotation(Word(w.begin(), w.begin() + sft::primitive_period(w)))] += mu.weights[k];
  }
  return {comp.begin(), comp.end()};
}

struct Candidate {
  Word word;
  std::vector<Vec2> orbit;
  Measure measure;
};

void take_best(PeriodicApproximation& best, std::vector<Candidate>& cands, const std::vector<double>& dist,
               const char* source) {
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const bool better = best.candidates_scanned == 0 && i == 0 ? true : dist[i] < best.distance;
    if (better) {
      best.distance = dist[i];
      best.word = cands[i].word;
      best.orbit = cands[i].orbit;
      best.period = cands[i].word.empty() ? cands[i].orbit.size() : cands[i].word.size();
      best.measure = std::move(cands[i].measure);
      best.source = source;
    }
  }
  best.candidates_scanned += cands.size();
}

std::vector<Measure> measures_of(const std::vector<Candidate>& cands) {
  std::vector<Measure> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back(c.measure);
  return out;
}

}  // namespace

TestFamily cylinder_family(std::size_t alphabet, std::size_t depth) {
  if (alphabet == 0 || depth == 0) throw InvalidInput("cylinder family needs a nonempty alphabet and depth >= 1");
  TestFamily f;
  for (std::size_t len = 1; len <= depth; ++len) {
    Word w(len, 0);
    for (;;) {
      f.observables.push_back(Cylinder{w});
      std::size_t k = len;
      while (k > 0 && w[k - 1] + 1u == alphabet) w[--k] = 0;
      if (k == 0) break;
      ++w[k - 1];
    }
    if (f.observables.size() > 1'000'000) throw InvalidInput("cylinder family too large");
  }
  double weight = 0.5;
  for (std::size_t j = 0; j < f.observables.size(); ++j, weight /= 2) f.weights.push_back(weight);
  f.description = "cylinders depth " + std::to_string(depth);
  return f;
}

TestFamily mode_family(int k_max) {
  if (k_max < 0) throw InvalidInput("mode bound must be non-negative");
  std::vector<Mode> modes;
  for (int a = -k_max; a <= k_max; ++a)
    for (int b = -k_max; b <= k_max; ++b) modes.push_back({a, b});
  std::sort(modes.begin(), modes.end(), [](const Mode& x, const Mode& y) {
    const int nx = std::max(std::abs(x.k1), std::abs(x.k2)), ny = std::max(std::abs(y.k1), std::abs(y.k2));
    if (nx != ny) return nx < ny;
    if (x.k1 != y.k1) return x.k1 < y.k1;
    return x.k2 < y.k2;
  });
  TestFamily f;
  double weight = 0.5;
  for (const Mode& m : modes) {
    f.observables.push_back(m);
    f.weights.push_back(weight);
    weight /= 2;
  }
  f.description = "modes |k| <= " + std::to_string(k_max);
  return f;
}

double MarkovMeasure::cylinder_mass(std::span<const Symbol> word) const {
  if (word.empty()) return 1.0;
  double total = 0.0;
  for (double v : forward_mass(*this, word)) total += v;
  return total;
}

double MarkovMeasure::entropy() const {
  double h = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (double q : p[i])
      if (q > 0.0) h -= pi[i] * q * std::log(q);
  return h;
}

ShiftAtoms cycle_measure(std::span<const Symbol> word) {
  if (word.empty()) throw InvalidInput("empty cycle word");
  const auto base = ShiftPoint::periodic(word);
  std::vector<ShiftPoint> orbit;
  for (std::size_t i = 0; i < word.size(); ++i) orbit.push_back(base.shifted(static_cast<std::int64_t>(i)));
  return periodic_measure(orbit);
}

MarkovMeasure parry_measure(const TransitionMatrix& a, Word labels) {
  if (!sft::is_primitive(a)) throw PreconditionError("Parry measure needs a primitive transition matrix");
  if (!labels.empty() && labels.size() != a.size()) throw InvalidInput("one label per state required");
  const auto pd = sft::perron(a, 1e-15);
  const std::size_t n = a.size();
  MarkovMeasure mu{a, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)), std::vector<double>(n), std::move(labels)};
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j)) row += mu.p[i][j] = pd.right[j] / (pd.root * pd.right[i]);
    for (double& q : mu.p[i]) q /= row;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += mu.pi[i] = pd.left[i] * pd.right[i];
  for (double& x : mu.pi) x /= total;
  return mu;
}

MarkovMeasure bernoulli_measure(const std::vector<double>& probabilities) {
  const std::size_t n = probabilities.size();
  if (n == 0) throw InvalidInput("empty probability vector");
  double total = 0.0;
  for (double q : probabilities) {
    if (!(q > 0.0)) throw InvalidInput("Bernoulli probabilities must be positive");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("Bernoulli probabilities must sum to 1");
  MarkovMeasure mu{TransitionMatrix::full_shift(n), std::vector<std::vector<double>>(n, probabilities), probabilities, {}};
  return mu;
}

std::complex<double> integrate(const Measure& mu, const Observable& phi) {
  return std::visit(
      overloaded{
          [](const ShiftAtoms& m, const Cylinder& c) -> std::complex<double> {
            double s = 0.0;
            for (std::size_t k = 0; k < m.points.size(); ++k)
              if (matches(m.points[k], c.word)) s += m.weights[k];
            return s;
          },
          [](const MarkovMeasure& m, const Cylinder& c) -> std::complex<double> { return m.cylinder_mass(c.word); },
          [](const TorusAtoms& m, const Mode& k) {
            std::complex<double> s = 0.0;
            for (std::size_t j = 0; j < m.points.size(); ++j) s += m.weights[j] * character(k, m.points[j]);
            return s;
          },
          [](const Lebesgue&, const Mode& k) -> std::complex<double> { return k.k1 == 0 && k.k2 == 0 ? 1.0 : 0.0; },
          [](const auto&, const Cylinder&) -> std::complex<double> { unsupported("a cylinder against a torus measure"); },
          [](const auto&, const Mode&) -> std::complex<double> { unsupported("a Fourier mode against a shift measure"); },
      },
      mu, phi);
}

std::vector<std::complex<double>> moments(const Measure& mu, const TestFamily& family) {
  std::vector<std::complex<double>> out;
  out.reserve(family.observables.size());
  for (const auto& phi : family.observables) out.push_back(integrate(mu, phi));
  return out;
}

double moment_distance(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b,
                       const TestFamily& family) {
  double d = 0.0;
  for (std::size_t j = 0; j < family.weights.size(); ++j) d += family.weights[j] * std::abs(a[j] - b[j]);
  return d;
}

double weak_star_distance(const Measure& mu, const Measure& nu, const TestFamily& family) {
  return moment_distance(moments(mu, family), moments(nu, family), family);
}

double correlation(const MarkovMeasure& mu, std::span<const Symbol> phi, std::span<const Symbol> psi, std::size_t n) {
  if (phi.empty() || psi.empty()) throw InvalidInput("cylinder observables need nonempty words");
  const std::size_t s = mu.pi.size();
  const double a = mu.cylinder_mass(phi), b = mu.cylinder_mass(psi);
  if (n >= phi.size()) {
    // alpha (P - Pi)^k beta, k = n - |phi| + 1: avoids cancelling two nearly equal numbers
    std::vector<double> w = forward_mass(mu, phi), next(s);
    const auto beta = backward_mass(mu, psi);
    for (std::size_t step = 0; step < n - phi.size() + 1; ++step) {
      double mass = 0.0;
      for (double x : w) mass += x;
      for (std::size_t j = 0; j < s; ++j) {
        double v = -mass * mu.pi[j];
        for (std::size_t i = 0; i < s; ++i) v += w[i] * mu.p[i][j];
        next[j] = v;
      }
      w.swap(next);
    }
    double c = 0.0;
    for (std::size_t i = 0; i < s; ++i) c += w[i] * beta[i];
    return c;
  }
  // overlapping windows: merge the two constraints
  Word merged(std::max(phi.size(), n + psi.size()));
  std::vector<bool> fixed(merged.size(), false);
  for (std::size_t i = 0; i < phi.size(); ++i) merged[i] = phi[i], fixed[i] = true;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (fixed[n + i] && merged[n + i] != psi[i]) return -a * b;
    merged[n + i] = psi[i];
  }
  return mu.cylinder_mass(merged) - a * b;
}

DecayFit correlation_decay(const MarkovMeasure& mu, std::span<const Symbol> word, std::size_t n_max) {
  if (n_max < 2) throw InvalidInput("decay fit needs at least two lags");
  DecayFit fit;
  std::vector<double> xs, ys;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double c = correlation(mu, word, word, n);
    fit.correlations.push_back(c);
    if (std::abs(c) < 1e-300) continue;
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log(std::abs(c)));
  }
  if (xs.size() < 2) throw NumericalError("correlations vanish; nothing to fit");
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / k, my += ys[i] / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  fit.rho = std::exp(slope);
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);

  const std::size_t s = mu.pi.size();
  Eigen::MatrixXd p(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mu.p[i][j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(p, false);
  std::vector<double> mods;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mods.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(mods.rbegin(), mods.rend());
  fit.spectral_rho = mods.size() > 1 ? mods[1] : 0.0;
  return fit;
}

std::vector<double> distance_scan(const std::vector<Measure>& candidates, const Measure& target,
                                  const TestFamily& family) {
  const auto t = moments(target, family);
  std::vector<double> out(candidates.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = moment_distance(moments(candidates[i], family), t, family);
  return out;
}

std::vector<double> distance_scan_serial(const std::vector<Measure>& candidates, const Measure& target,
                                         const TestFamily& family) {
  const auto t = moments(target, family);
  std::vector<double> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = moment_distance(moments(candidates[i], family), t, family);
  return out;
}

PeriodicApproximation approximate_by_periodic(const Measure& target, const TransitionMatrix& a, double epsilon,
                                              const TestFamily& family, const PeriodicSearchOptions& opt) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  PeriodicApproximation best;
  for (std::size_t n = 1; n <= opt.max_period; ++n) {
    const auto cycles = sft::enumerate_cycles(a, n, opt.cycle_limit);
    std::vector<Candidate> cands;
    for (const auto& c : cycles.cycles)
      if (c.is_primitive_orbit()) cands.push_back({c.states, {}, cycle_measure(c.states)});
    take_best(best, cands, distance_scan(measures_of(cands), target, family), "cycle");
    if (cycles.truncated) break;
    if (opt.stop_at_first_period && best.candidates_scanned > 0 && best.distance <= epsilon) break;
  }
  if (best.candidates_scanned > 0 && best.distance <= epsilon) {
    best.within = true;
    return best;
  }
  // block concatenations w_1^{r_1} c_1 w_2^{r_2} c_2 ... with r_j proportional to the target weights
  if (const auto* atoms = std::get_if<ShiftAtoms>(&target)) {
    const auto comps = periodic_components(*atoms);
    if (comps.size() > 1) {
      double wmin = 1.0;
      for (const auto& [w, weight] : comps) wmin = std::min(wmin, weight);
      const std::size_t max_len = std::max<std::size_t>(8 * opt.max_period, 256);
      std::vector<Candidate> cands;
      for (std::size_t k = 1; k <= max_len; ++k) {
        Word word;
        bool ok = true;
        for (std::size_t j = 0; j < comps.size() && ok; ++j) {
          const Word& w = comps[j].first;
          const auto reps = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(k * comps[j].second / wmin)));
          for (std::size_t r = 0; r < reps; ++r) word.insert(word.end(), w.begin(), w.end());
          const Word& next = comps[(j + 1) % comps.size()].first;
          if (a(word.back(), next.front())) continue;
          const auto bridge = sft::shortest_walk(a, word.back(), next.front(), 2);
          if (!bridge) ok = false;
          else word.insert(word.end(), bridge->begin() + 1, bridge->end() - 1);
        }
        if (!ok) break;
        if (word.size() > max_len) break;
        if (!a.admissible_cyclic(word)) continue;
        cands.push_back({word, {}, cycle_measure(word)});
      }
      take_best(best, cands, distance_scan(measures_of(cands), target, family), "blocks");
    }
  }
  best.within = best.candidates_scanned > 0 && best.distance <= epsilon;
  if (best.candidates_scanned == 0) throw PreconditionError("no periodic candidates within the horizon");
  return best;
}

PeriodicApproximation approximate_by_periodic(const Measure& target, const ToralAutomorphism& f, double epsilon,
                                              const TestFamily& family, const PeriodicSearchOptions& opt) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  PeriodicApproximation best;
  for (std::size_t n = 1; n <= opt.max_period; ++n) {
    if (toral_fixed_point_count(f, n) > opt.point_cap) break;
    std::vector<Candidate> cands;
    for (const auto& orbit : toral_orbits(f, n, opt.point_cap)) {
      if (orbit.size() != n) continue;
      Candidate c;
      for (const auto& r : orbit) c.orbit.push_back(r.value());
      c.measure = periodic_measure(c.orbit);
      cands.push_back(std::move(c));
    }
    take_best(best, cands, distance_scan(measures_of(cands), target, family), "orbit");
    if (opt.stop_at_first_period && best.candidates_scanned > 0 && best.distance <= epsilon) break;
  }
  if (best.candidates_scanned == 0) throw PreconditionError("no periodic orbits within the horizon");
  best.within = best.distance <= epsilon;
  return best;
}

MarkovMeasure block_chain_measure(const TransitionMatrix& a, std::span<const Symbol> p, std::span<const Symbol> excursion,
                                  std::size_t m) {
  if (p.empty() || excursion.empty() || m == 0) throw InvalidInput("block chain needs nonempty blocks and m >= 1");
  const std::size_t l0 = m * p.size(), l1 = excursion.size(), n = l0 + l1;
  if (n > TransitionMatrix::kMaxSize) throw PreconditionError("block chain exceeds 64 states");
  Word labels(n);
  for (std::size_t i = 0; i < l0; ++i) labels[i] = p[i % p.size()];
  for (std::size_t i = 0; i < l1; ++i) labels[l0 + i] = excursion[i];
  std::vector<std::vector<int>> rows(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (i + 1 != l0) rows[i][i + 1] = 1;
  rows[l0 - 1][0] = 1;   // p^m -> p^m
  rows[l0 - 1][l0] = 1;  // p^m -> E
  rows[n - 1][0] = 1;    // E -> p^m
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rows[i][j] && !a(labels[i], labels[j])) throw InvalidInput("block chain labels are not admissible");
  return parry_measure(TransitionMatrix(rows), labels);
}

BernoulliApproximation bernoulli_approximation(const Measure& target, const TransitionMatrix& a, Word p,
                                               double epsilon, const TestFamily& family, const BernoulliOptions& opt) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!sft::is_primitive(a)) throw PreconditionError("the ambient subshift must be mixing");
  BernoulliApproximation out;
  if (p.empty()) p = approximate_by_periodic(target, a, epsilon / 2, family, opt.periodic).word;
  p.resize(sft::primitive_period(p));
  if (!a.admissible_cyclic(p)) throw InvalidInput("periodic word is not an admissible cycle");
  out.p = p;
  const Measure mu_p = cycle_measure(p);
  const auto mp = moments(mu_p, family), mt = moments(target, family);
  out.periodic_distance = moment_distance(mp, mt, family);
  out.excursion = symbolic_homoclinic_point(a, p).excursion;
  const std::size_t cap = TransitionMatrix::kMaxSize;
  if (out.excursion.size() + p.size() > cap) throw PreconditionError("blocks do not fit in 64 states");
  const std::size_t m_max = opt.m_max ? opt.m_max : (cap - out.excursion.size()) / p.size();
  std::optional<std::size_t> chosen, fallback;
  for (std::size_t m = 1; m <= m_max; ++m) {
    if (m * p.size() + out.excursion.size() > cap) break;
    BlockStep step;
    step.m = m;
    // the expanded graph is primitive iff gcd(m|p|, |E|) = 1 (cycle lengths m|p| and m|p| + |E|)
    std::optional<MarkovMeasure> nu;
    try {
      nu = block_chain_measure(a, p, out.excursion, m);
      step.primitive = true;
    } catch (const PreconditionError&) {
      out.scan.push_back(step);
      continue;
    }
    const auto mn = moments(*nu, family);
    step.distance_to_periodic = moment_distance(mn, mp, family);
    step.distance_to_target = moment_distance(mn, mt, family);
    out.scan.push_back(step);
    if (!fallback || step.distance_to_periodic < out.scan[*fallback].distance_to_periodic) fallback = out.scan.size() - 1;
    if (!chosen && step.distance_to_periodic <= epsilon / 2) {
      chosen = out.scan.size() - 1;
      out.measure = std::move(*nu);
      if (!opt.full_scan) break;
    }
  }
  const auto pick = chosen ? chosen : fallback;
  if (!pick) throw PreconditionError("no m gives a mixing block chain within 64 states");
  const BlockStep& s = out.scan[*pick];
  out.m = s.m;
  out.distance_to_periodic = s.distance_to_periodic;
  out.distance_to_target = s.distance_to_target;
  if (!out.measure) out.measure = block_chain_measure(a, p, out.excursion, s.m);
  out.block_support = out.measure->support;
  out.within = chosen.has_value() && out.distance_to_target <= epsilon;
  return out;
}

}  // namespace mixkit
