#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mixkit {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

/// 0/1 adjacency matrix of a subshift of finite type.
///
/// Construction enforces the essential-matrix contract: square, entries in
/// {0,1}, at most kMaxSize symbols, and every row and every column holds a 1.
/// Matrices that violate it are rejected with InvalidInput rather than trimmed.
class TransitionMatrix {
 public:
  static constexpr std::size_t kMaxSize = 64;

  explicit TransitionMatrix(const std::vector<std::vector<int>>& rows);

  static TransitionMatrix full_shift(std::size_t symbols);

  /// True when `rows` would be accepted by the constructor.
  static bool is_valid_essential(const std::vector<std::vector<int>>& rows);

  std::size_t size() const noexcept { return size_; }
  bool operator()(std::size_t i, std::size_t j) const noexcept { return (rows_[i] >> j) & 1U; }

  /// Successor set of symbol i as a bit mask.
  std::uint64_t successors(std::size_t i) const noexcept { return rows_[i]; }
  std::uint64_t predecessors(std::size_t j) const noexcept { return cols_[j]; }
  std::uint64_t all_symbols() const noexcept;

  std::vector<std::vector<int>> rows() const;
  std::size_t edge_count() const noexcept;

  bool admissible(std::span<const Symbol> word) const noexcept;
  /// Admissible including the closing transition last -> first.
  bool admissible_cyclic(std::span<const Symbol> word) const noexcept;

  /// Induced matrix on `states` (in the given order). Throws InvalidInput if
  /// the restriction is not essential.
  TransitionMatrix restricted(std::span<const std::size_t> states) const;

  bool operator==(const TransitionMatrix& other) const noexcept = default;

 private:
  TransitionMatrix() = default;
  void rebuild_columns() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint64_t> cols_;
};

/// A cyclic word stored in its canonical rotation (lexicographically least).
struct SymbolicCycle {
  Word states;
  std::size_t primitive_period = 0;

  static SymbolicCycle from_word(std::span<const Symbol> word);

  std::size_t period() const noexcept { return states.size(); }
  bool is_primitive_orbit() const noexcept { return primitive_period == states.size(); }
  Word primitive_word() const { return Word(states.begin(), states.begin() + primitive_period); }

  bool operator==(const SymbolicCycle&) const = default;
  auto operator<=>(const SymbolicCycle& other) const { return states <=> other.states; }
};

struct CyclicDecomposition {
  std::size_t period = 0;
  /// classes[c] maps into classes[(c + 1) % period]; classes[0] holds symbol 0.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
};

struct CycleEnumeration {
  std::vector<SymbolicCycle> cycles;
  bool truncated = false;
};

struct PerronData {
  double root = 0.0;
  std::vector<double> right;  // A v = root v, sum 1
  std::vector<double> left;   // u A = root u, normalised so u.v = 1
  std::size_t iterations = 0;
};

namespace sft {

bool is_irreducible(const TransitionMatrix& a);

/// Some power <= (n-1)^2 + 1 is entrywise positive.
bool is_primitive(const TransitionMatrix& a);

/// gcd of cycle lengths through symbol 0. Throws PreconditionError on
/// reducible input.
std::size_t class_period(const TransitionMatrix& a);

CyclicDecomposition cyclic_decomposition(const TransitionMatrix& a);

/// trace(A^n) in exact arithmetic; OverflowError if it does not fit 64 bits.
std::uint64_t count_periodic_points(const TransitionMatrix& a, std::uint64_t n);

/// All admissible cyclic words of length exactly n, one per rotation class,
/// in lexicographic order of their canonical rotations. OpenMP kernel.
CycleEnumeration enumerate_cycles(const TransitionMatrix& a, std::size_t n, std::size_t limit);
/// Single-threaded reference for enumerate_cycles.
CycleEnumeration enumerate_cycles_serial(const TransitionMatrix& a, std::size_t n, std::size_t limit);

/// Perron root and eigenvectors of an irreducible matrix (power iteration on
/// A + I, stopped on Collatz-Wielandt bounds).
PerronData perron(const TransitionMatrix& a, double rel_tol = 1e-12, std::size_t max_iter = 2'000'000);

double topological_entropy(const TransitionMatrix& a);

/// All n in [0, horizon] with sigma^n([u]) intersecting [v].
std::vector<std::size_t> return_time_set(const TransitionMatrix& a, std::span<const Symbol> u,
                                         std::span<const Symbol> v, std::size_t horizon);

/// Strongly connected components that carry at least one cycle, each sorted,
/// ordered by smallest member.
std::vector<std::vector<std::size_t>> irreducible_components(const TransitionMatrix& a);

/// Lexicographically least walk of exactly `steps` transitions from `from` to
/// `to`, returned as steps + 1 symbols.
std::optional<Word> walk_of_length(const TransitionMatrix& a, std::size_t from, std::size_t to, std::size_t steps);

/// Shortest walk with at least `min_steps` transitions from `from` to `to`.
std::optional<Word> shortest_walk(const TransitionMatrix& a, std::size_t from, std::size_t to,
                                  std::size_t min_steps = 1);

/// Lexicographically least rotation.
Word minimal_rotation(std::span<const Symbol> word);
/// Smallest d dividing |word| with word invariant under rotation by d.
std::size_t primitive_period(std::span<const Symbol> word);
/// True if `factor` occurs in the cyclic word `cycle` (wrapping allowed).
bool has_cyclic_factor(std::span<const Symbol> cycle, std::span<const Symbol> factor);

/// All admissible words of length m, lexicographic.
std::vector<Word> admissible_words(const TransitionMatrix& a, std::size_t m);

}  // namespace sft
}  // namespace mixkit
