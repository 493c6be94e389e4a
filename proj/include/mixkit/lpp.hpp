#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mixkit/sft.hpp"

namespace mixkit {

// Symbolic large periods property. "epsilon-dense orbit" is read as: the
// cyclic word contains every admissible m-word as a cyclic factor, with m
// the smallest integer such that 2^-m <= epsilon.

struct LppWitness {
  Word word;  // cyclic word of length n, as constructed
  std::size_t primitive_period = 0;
  std::string route;  // "splice" or "search"

  bool non_primitive() const noexcept { return primitive_period != word.size(); }
};

struct LppCertificate {
  double epsilon = 0.0;
  std::size_t m = 0;
  std::size_t n0 = 0;
  std::size_t n_max = 0;
  std::size_t covering_length = 0;
  std::map<std::size_t, LppWitness> witnesses;  // one per n in [n0, n_max]
  std::vector<std::size_t> alphabet;            // symbols of the original matrix the witnesses live on
};

struct LppRefutation {
  double epsilon = 0.0;
  std::size_t m = 0;
  std::size_t blocking_n = 0;
  bool exhaustive = false;  // false means inconclusive
  std::string reason;
};

using LppResult = std::variant<LppCertificate, LppRefutation>;

enum class WitnessStatus { found, none, unknown };

struct WitnessOutcome {
  WitnessStatus status = WitnessStatus::unknown;
  std::optional<LppWitness> witness;
  std::string reason;  // why none/unknown
};

struct LppOptions {
  // Node budget of the exhaustive dense-cycle search used below the splice range.
  std::size_t search_nodes = 200'000;
  // Periods evaluated per parallel batch when scanning down from n_max.
  std::size_t batch = 16;
};

namespace lpp {

/// Smallest m >= 1 with 2^-m <= epsilon. epsilon must lie in (0, 1].
std::size_t word_length_for(double epsilon);

/// Covering-cycle construction: one admissible cyclic word containing every
/// admissible m-word. Empty for reducible matrices.
std::optional<Word> covering_cycle(const TransitionMatrix& a, std::size_t m);

/// True if the cyclic word contains every admissible m-word.
bool is_dense(const TransitionMatrix& a, std::span<const Symbol> cycle, std::size_t m);

/// Precomputed witness machinery for one (matrix, m) pair.
class WitnessFactory {
 public:
  WitnessFactory(const TransitionMatrix& a, std::size_t m, std::size_t n_max, LppOptions options = {});

  WitnessOutcome evaluate(std::size_t n) const;
  /// Splice-and-pad witness for n, if the construction reaches n.
  std::optional<LppWitness> splice(std::size_t n) const;
  /// Exhaustive search (bounded by the node budget) for a dense cycle of length n.
  WitnessOutcome search(std::size_t n) const;

  std::size_t covering_length() const noexcept { return covering_.size(); }
  std::size_t word_count() const noexcept { return words_.size(); }

 private:
  const TransitionMatrix& a_;
  std::size_t m_;
  std::size_t n_max_;
  LppOptions options_;
  std::vector<Word> words_;
  Word covering_;
  std::size_t linear_length_ = 0;  // prefix of covering_ holding every m-word
  bool irreducible_ = false;
  std::vector<char> has_closed_walk_;       // index n: some state has a closed walk of length n
  std::vector<std::size_t> pad_choice_;     // index k: loop length used first when padding by k (SIZE_MAX = impossible)
  std::vector<std::optional<Word>> loops_;  // index j: a closed walk of length j, as j + 1 symbols
};

/// Statuses for each n in `periods`; OpenMP kernel.
std::vector<WitnessOutcome> witness_scan(const WitnessFactory& factory, const std::vector<std::size_t>& periods);
/// Single-threaded reference for witness_scan.
std::vector<WitnessOutcome> witness_scan_serial(const WitnessFactory& factory, const std::vector<std::size_t>& periods);

/// Throws HorizonTooSmall when n_max cannot hold a covering cycle.
LppResult lpp_certificate(const TransitionMatrix& a, double epsilon, std::size_t n_max, LppOptions options = {});

/// Restricts the witness search to the irreducible component containing p.
LppResult homoclinic_lpp_check(const TransitionMatrix& a, std::span<const Symbol> p, double epsilon,
                               std::size_t n_max, LppOptions options = {});

/// Throws PreconditionError if the result is a refutation.
const LppCertificate& expect_certificate(const LppResult& result);

struct MixingPairReport {
  Word u;
  Word v;
  std::size_t first_hit = 0;   // n1: first n >= 1 with sigma^n(V) meeting U
  std::size_t threshold = 0;   // N(U, V) from the certificate
  std::size_t ball_m = 0;      // word length of the ball inside V mapped into U after n1 steps
  std::size_t checked_until = 0;
  std::size_t witness_hits = 0;  // hits certified through a certificate witness
  std::size_t direct_hits = 0;   // hits only confirmed by matrix powers
  std::vector<std::size_t> misses;        // n >= threshold without a hit
  std::vector<std::size_t> early_misses;  // n < threshold without a hit (allowed)
};

struct MixingReport {
  std::vector<MixingPairReport> pairs;
  bool all_hit = true;
};

/// For each cylinder pair, checks sigma^n(U) meets V for every n in
/// [threshold, n_max - n1], using the period-(n + n1) witness through a
/// cylinder ball B inside V with sigma^n1(B) inside U. When B is finer than
/// the certificate's m, a certificate at B's word length is computed first.
MixingReport verify_mixing_from_lpp(const TransitionMatrix& a, const LppCertificate& cert,
                                    const std::vector<std::pair<Word, Word>>& pairs);

}  // namespace lpp
}  // namespace mixkit
