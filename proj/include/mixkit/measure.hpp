#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mixkit/maps.hpp"
#include "mixkit/sft.hpp"
#include "mixkit/shadowing.hpp"
#include "mixkit/shift_point.hpp"

namespace mixkit {

/// Indicator of the cylinder {x : x_0..x_{k-1} = word}.
struct Cylinder {
  Word word;
};
/// x -> exp(2 pi i (k1 x + k2 y)).
struct Mode {
  int k1 = 0;
  int k2 = 0;
};
using Observable = std::variant<Cylinder, Mode>;

/// Observables phi_1..phi_J with weights 2^-j.
struct TestFamily {
  std::vector<Observable> observables;
  std::vector<double> weights;
  std::string description;
};

/// All words of length 1..depth over the alphabet, by length then lexicographic.
TestFamily cylinder_family(std::size_t alphabet, std::size_t depth);
/// Modes with max(|k1|, |k2|) <= k_max: the constant first, then by (|k|_inf, k1, k2).
TestFamily mode_family(int k_max);

template <class Point>
struct FiniteSupportMeasure {
  std::vector<Point> points;
  std::vector<double> weights;
};
using ShiftAtoms = FiniteSupportMeasure<ShiftPoint>;
using TorusAtoms = FiniteSupportMeasure<Vec2>;

/// Stationary Markov chain on the states of `support`; the state i emits
/// labels[i] (identity when labels is empty).
struct MarkovMeasure {
  TransitionMatrix support;
  std::vector<std::vector<double>> p;
  std::vector<double> pi;
  Word labels;

  Symbol label(std::size_t state) const noexcept {
    return labels.empty() ? static_cast<Symbol>(state) : labels[state];
  }
  /// Mass of the cylinder [word] at coordinate 0.
  double cylinder_mass(std::span<const Symbol> word) const;
  /// -sum pi_i P_ij log P_ij.
  double entropy() const;
};

struct Lebesgue {};

using Measure = std::variant<ShiftAtoms, TorusAtoms, MarkovMeasure, Lebesgue>;

template <class Point>
FiniteSupportMeasure<Point> periodic_measure(const std::vector<Point>& orbit) {
  FiniteSupportMeasure<Point> m;
  m.points = orbit;
  m.weights.assign(orbit.size(), 1.0 / static_cast<double>(orbit.size()));
  return m;
}
template <class Point>
FiniteSupportMeasure<Point> periodic_measure(const PeriodicOrbit<Point>& orbit) {
  return periodic_measure(orbit.points);
}
/// Uniform measure on the shifts of w^inf.
ShiftAtoms cycle_measure(std::span<const Symbol> word);

/// Maximal-entropy Markov measure; PreconditionError unless A is primitive.
MarkovMeasure parry_measure(const TransitionMatrix& a, Word labels = {});
/// i.i.d. measure on the full shift.
MarkovMeasure bernoulli_measure(const std::vector<double>& probabilities);

/// InvalidInput for pairs with no meaning (a mode on a shift measure, ...).
std::complex<double> integrate(const Measure& mu, const Observable& phi);
/// Integrals of every observable of the family.
std::vector<std::complex<double>> moments(const Measure& mu, const TestFamily& family);
double weak_star_distance(const Measure& mu, const Measure& nu, const TestFamily& family);
double moment_distance(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b,
                       const TestFamily& family);

/// int phi (psi o sigma^n) dmu - int phi dmu int psi dmu.
double correlation(const MarkovMeasure& mu, std::span<const Symbol> phi, std::span<const Symbol> psi, std::size_t n);

struct DecayFit {
  double rho = 0.0;        // exp(slope) of log|C_n| against n
  double r_squared = 0.0;
  double spectral_rho = 0.0;  // second largest eigenvalue modulus of P
  std::vector<double> correlations;
};
/// Least-squares fit of log|C_n|, n = 1..n_max, for phi = psi = [word].
DecayFit correlation_decay(const MarkovMeasure& mu, std::span<const Symbol> word, std::size_t n_max);

/// Distances of each candidate to the target. OpenMP kernel.
std::vector<double> distance_scan(const std::vector<Measure>& candidates, const Measure& target,
                                  const TestFamily& family);
/// Single-threaded reference for distance_scan.
std::vector<double> distance_scan_serial(const std::vector<Measure>& candidates, const Measure& target,
                                         const TestFamily& family);

struct PeriodicApproximation {
  Measure measure;
  Word word;                 // symbolic candidates
  std::vector<Vec2> orbit;   // torus candidates
  std::size_t period = 0;
  double distance = 0.0;
  bool within = false;
  std::size_t candidates_scanned = 0;
  std::string source;  // "cycle", "blocks" or "orbit"
};

struct PeriodicSearchOptions {
  std::size_t max_period = 12;
  bool stop_at_first_period = true;  // stop after the first period that reaches epsilon
  std::size_t cycle_limit = 200'000;
  std::uint64_t point_cap = 1'000'000;
};

/// Cycles of A of length 1..max_period, then block concatenations following
/// the target's periodic components. Ties go to the shorter, then
/// lexicographically smaller word.
PeriodicApproximation approximate_by_periodic(const Measure& target, const TransitionMatrix& a, double epsilon,
                                              const TestFamily& family, const PeriodicSearchOptions& opt = {});
/// Orbits of exact period 1..max_period of the toral automorphism.
PeriodicApproximation approximate_by_periodic(const Measure& target, const ToralAutomorphism& f, double epsilon,
                                              const TestFamily& family, const PeriodicSearchOptions& opt = {});

struct BlockStep {
  std::size_t m = 0;
  bool primitive = false;
  double distance_to_periodic = 0.0;  // d(nu_m, mu_p)
  double distance_to_target = 0.0;
};

struct BernoulliApproximation {
  Word p;          // periodic word approximating the target
  Word excursion;  // block of the homoclinic excursion
  double periodic_distance = 0.0;  // d(mu_p, target)
  std::size_t m = 0;               // loops of p per long block
  std::optional<MarkovMeasure> measure;
  TransitionMatrix block_support = TransitionMatrix::full_shift(1);
  double distance_to_periodic = 0.0;
  double distance_to_target = 0.0;
  bool within = false;
  std::vector<BlockStep> scan;  // every m tried
};

struct BernoulliOptions {
  std::size_t m_max = 0;  // 0: largest m with at most 64 expanded states
  bool full_scan = false;  // keep scanning after the first m within epsilon/2
  PeriodicSearchOptions periodic;
};

/// Block chain on {p^m, excursion} with transitions p^m -> p^m, p^m -> E,
/// E -> p^m, expanded to one state per symbol and given its Parry measure.
/// `p` empty: chosen by approximate_by_periodic at epsilon/2.
BernoulliApproximation bernoulli_approximation(const Measure& target, const TransitionMatrix& a, Word p,
                                               double epsilon, const TestFamily& family,
                                               const BernoulliOptions& opt = {});

/// Expanded state graph of the block chain (one state per symbol of p^m and E).
MarkovMeasure block_chain_measure(const TransitionMatrix& a, std::span<const Symbol> p, std::span<const Symbol> excursion,
                                  std::size_t m);

}  // namespace mixkit
