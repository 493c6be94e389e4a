#include "mixkit/sft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "mixkit/errors.hpp"

namespace mixkit {
namespace {

constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

std::uint64_t image(const TransitionMatrix& a, std::uint64_t set) {
  std::uint64_t out = 0;
  while (set != 0) {
    const auto i = static_cast<std::size_t>(std::countr_zero(set));
    set &= set - 1;
    out |= a.successors(i);
  }
  return out;
}

std::uint64_t preimage(const TransitionMatrix& a, std::uint64_t set) {
  std::uint64_t out = 0;
  while (set != 0) {
    const auto j = static_cast<std::size_t>(std::countr_zero(set));
    set &= set - 1;
    out |= a.predecessors(j);
  }
  return out;
}

// Transitive closure over walks of length >= 1.
std::vector<std::uint64_t> closure(const TransitionMatrix& a) {
  const std::size_t n = a.size();
  std::vector<std::uint64_t> reach(n);
  for (std::size_t i = 0; i < n; ++i) reach[i] = a.successors(i);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i] & bit(k)) reach[i] |= reach[k];
  return reach;
}

// Row masks of the boolean product x * y.
std::vector<std::uint64_t> bool_product(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
  std::vector<std::uint64_t> out(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::uint64_t row = x[i];
    while (row != 0) {
      const auto k = static_cast<std::size_t>(std::countr_zero(row));
      row &= row - 1;
      out[i] |= y[k];
    }
  }
  return out;
}

struct BfsLevels {
  std::vector<long> level;
  bool all_reached = true;
};

BfsLevels bfs_levels(const TransitionMatrix& a) {
  BfsLevels out;
  out.level.assign(a.size(), -1);
  std::queue<std::size_t> queue;
  out.level[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop();
    std::uint64_t succ = a.successors(u);
    while (succ != 0) {
      const auto v = static_cast<std::size_t>(std::countr_zero(succ));
      succ &= succ - 1;
      if (out.level[v] < 0) {
        out.level[v] = out.level[u] + 1;
        queue.push(v);
      }
    }
  }
  out.all_reached = std::ranges::all_of(out.level, [](long l) { return l >= 0; });
  return out;
}

void require_irreducible(const TransitionMatrix& a, const char* op) {
  if (!sft::is_irreducible(a)) throw PreconditionError(std::string(op) + ": transition matrix is reducible");
}

bool is_canonical_rotation(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Symbol a = w[(r + k) % n];
      if (a < w[k]) return false;
      if (a > w[k]) break;
    }
  }
  return true;
}

// Depth-first enumeration of canonical cycles whose first symbols are `prefix`.
class CycleSearch {
 public:
  CycleSearch(const TransitionMatrix& a, std::size_t n, std::size_t cap) : a_(a), n_(n), cap_(cap) {}

  // Appends canonical cycles beginning with `prefix` in lexicographic order;
  // returns false once more than cap cycles were seen.
  bool run(const Word& prefix, std::vector<SymbolicCycle>& out) {
    const Symbol s0 = prefix.front();
    allowed_ = a_.all_symbols() & ~(bit(s0) - 1);
    can_close_.assign(n_ + 1, 0);
    can_close_[0] = bit(s0);
    for (std::size_t k = 1; k <= n_; ++k) can_close_[k] = preimage(a_, can_close_[k - 1]) & allowed_;
    word_ = prefix;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (!(allowed_ & bit(prefix[i]))) return true;
      if (i > 0 && !a_(prefix[i - 1], prefix[i])) return true;
    }
    if (!(can_close_[n_ - prefix.size() + 1] & bit(prefix.back()))) return true;
    out_ = &out;
    return descend();
  }

 private:
  bool descend() {
    const std::size_t d = word_.size();
    if (d == n_) {
      if (!a_(word_.back(), word_.front()) || !is_canonical_rotation(word_)) return true;
      if (out_->size() >= cap_) return false;
      out_->push_back(SymbolicCycle{word_, sft::primitive_period(word_)});
      return true;
    }
    std::uint64_t next = a_.successors(word_.back()) & allowed_ & can_close_[n_ - d];
    while (next != 0) {
      const auto s = static_cast<Symbol>(std::countr_zero(next));
      next &= next - 1;
      word_.push_back(s);
      const bool more = descend();
      word_.pop_back();
      if (!more) return false;
    }
    return true;
  }

  const TransitionMatrix& a_;
  std::size_t n_;
  std::size_t cap_;
  std::uint64_t allowed_ = 0;
  std::vector<std::uint64_t> can_close_;
  Word word_;
  std::vector<SymbolicCycle>* out_ = nullptr;
};

std::vector<Word> cycle_prefixes(const TransitionMatrix& a, std::size_t n) {
  std::vector<Word> prefixes;
  for (std::size_t s0 = 0; s0 < a.size(); ++s0) {
    if (n == 1) {
      prefixes.push_back({static_cast<Symbol>(s0)});
      continue;
    }
    std::uint64_t succ = a.successors(s0) & ~(bit(s0) - 1);
    while (succ != 0) {
      const auto s1 = static_cast<Symbol>(std::countr_zero(succ));
      succ &= succ - 1;
      prefixes.push_back({static_cast<Symbol>(s0), s1});
    }
  }
  return prefixes;
}

CycleEnumeration merge_cycle_chunks(std::vector<std::vector<SymbolicCycle>>& chunks, std::vector<char>& overflowed,
                                    std::size_t limit) {
  CycleEnumeration result;
  for (std::size_t t = 0; t < chunks.size(); ++t) {
    for (auto& c : chunks[t]) {
      if (result.cycles.size() == limit) {
        result.truncated = true;
        return result;
      }
      result.cycles.push_back(std::move(c));
    }
    if (overflowed[t]) {
      result.truncated = true;
      return result;
    }
  }
  return result;
}

using u128 = unsigned __int128;

std::vector<u128> checked_product(const std::vector<u128>& x, const std::vector<u128>& y, std::size_t n) {
  std::vector<u128> out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const u128 xik = x[i * n + k];
      if (xik == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        u128 term = 0;
        if (__builtin_mul_overflow(xik, y[k * n + j], &term) ||
            __builtin_add_overflow(out[i * n + j], term, &out[i * n + j]))
          throw OverflowError("count_periodic_points: integer overflow in matrix power");
      }
    }
  return out;
}

}  // namespace

TransitionMatrix::TransitionMatrix(const std::vector<std::vector<int>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw InvalidInput("transition matrix: empty");
  if (n > kMaxSize) throw InvalidInput("transition matrix: more than 64 symbols");
  size_ = n;
  rows_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidInput("transition matrix: not square (row " + std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      const int e = rows[i][j];
      if (e != 0 && e != 1) throw InvalidInput("transition matrix: entries must be 0 or 1");
      if (e == 1) rows_[i] |= bit(j);
    }
  }
  rebuild_columns();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows_[i] == 0)
      throw InvalidInput("transition matrix: not essential, symbol " + std::to_string(i) + " has no successor");
    if (cols_[i] == 0)
      throw InvalidInput("transition matrix: not essential, symbol " + std::to_string(i) + " has no predecessor");
  }
}

TransitionMatrix TransitionMatrix::full_shift(std::size_t symbols) {
  return TransitionMatrix(std::vector<std::vector<int>>(symbols, std::vector<int>(symbols, 1)));
}

bool TransitionMatrix::is_valid_essential(const std::vector<std::vector<int>>& rows) {
  try {
    TransitionMatrix probe(rows);
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

void TransitionMatrix::rebuild_columns() noexcept {
  cols_.assign(size_, 0);
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j)
      if (rows_[i] & bit(j)) cols_[j] |= bit(i);
}

std::uint64_t TransitionMatrix::all_symbols() const noexcept {
  return size_ == 64 ? ~std::uint64_t{0} : bit(size_) - 1;
}

std::vector<std::vector<int>> TransitionMatrix::rows() const {
  std::vector<std::vector<int>> out(size_, std::vector<int>(size_, 0));
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j) out[i][j] = (*this)(i, j) ? 1 : 0;
  return out;
}

std::size_t TransitionMatrix::edge_count() const noexcept {
  std::size_t count = 0;
  for (auto r : rows_) count += static_cast<std::size_t>(std::popcount(r));
  return count;
}

bool TransitionMatrix::admissible(std::span<const Symbol> word) const noexcept {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= size_) return false;
    if (i > 0 && !(*this)(word[i - 1], word[i])) return false;
  }
  return true;
}

bool TransitionMatrix::admissible_cyclic(std::span<const Symbol> word) const noexcept {
  return !word.empty() && admissible(word) && (*this)(word.back(), word.front());
}

TransitionMatrix TransitionMatrix::restricted(std::span<const std::size_t> states) const {
  std::vector<std::vector<int>> rows(states.size(), std::vector<int>(states.size(), 0));
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < states.size(); ++j) rows[i][j] = (*this)(states[i], states[j]) ? 1 : 0;
  return TransitionMatrix(rows);
}

SymbolicCycle SymbolicCycle::from_word(std::span<const Symbol> word) {
  if (word.empty()) throw InvalidInput("cycle: empty word");
  Word canon = sft::minimal_rotation(word);
  const std::size_t pp = sft::primitive_period(canon);
  return SymbolicCycle{std::move(canon), pp};
}

namespace sft {

bool is_irreducible(const TransitionMatrix& a) {
  const auto reach = closure(a);
  const std::uint64_t all = a.all_symbols();
  return std::ranges::all_of(reach, [all](std::uint64_t r) { return r == all; });
}

bool is_primitive(const TransitionMatrix& a) {
  const std::size_t n = a.size();
  const std::uint64_t all = a.all_symbols();
  std::vector<std::uint64_t> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = a.successors(i);
  auto power = base;
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (std::ranges::all_of(power, [all](std::uint64_t r) { return r == all; })) return true;
    power = bool_product(power, base);
  }
  return false;
}

std::size_t class_period(const TransitionMatrix& a) {
  require_irreducible(a, "class_period");
  const auto levels = bfs_levels(a);
  long g = 0;
  for (std::size_t u = 0; u < a.size(); ++u)
    for (std::size_t v = 0; v < a.size(); ++v)
      if (a(u, v)) g = std::gcd(g, std::labs(levels.level[u] + 1 - levels.level[v]));
  return static_cast<std::size_t>(g);
}

CyclicDecomposition cyclic_decomposition(const TransitionMatrix& a) {
  CyclicDecomposition out;
  out.period = class_period(a);
  const auto levels = bfs_levels(a);
  out.classes.assign(out.period, {});
  out.class_of.assign(a.size(), 0);
  for (std::size_t s = 0; s < a.size(); ++s) {
    const auto c = static_cast<std::size_t>(levels.level[s]) % out.period;
    out.class_of[s] = c;
    out.classes[c].push_back(s);
  }
  return out;
}

std::uint64_t count_periodic_points(const TransitionMatrix& a, std::uint64_t n) {
  if (n == 0) throw InvalidInput("count_periodic_points: n must be >= 1");
  const std::size_t sz = a.size();
  std::vector<u128> base(sz * sz, 0), acc(sz * sz, 0);
  for (std::size_t i = 0; i < sz; ++i) {
    acc[i * sz + i] = 1;
    for (std::size_t j = 0; j < sz; ++j) base[i * sz + j] = a(i, j) ? 1 : 0;
  }
  std::uint64_t e = n;
  while (true) {
    if (e & 1U) acc = checked_product(acc, base, sz);
    e >>= 1U;
    if (e == 0) break;
    base = checked_product(base, base, sz);
  }
  u128 trace = 0;
  for (std::size_t i = 0; i < sz; ++i)
    if (__builtin_add_overflow(trace, acc[i * sz + i], &trace))
      throw OverflowError("count_periodic_points: integer overflow in trace");
  if (trace > std::numeric_limits<std::uint64_t>::max())
    throw OverflowError("count_periodic_points: trace exceeds 64 bits");
  return static_cast<std::uint64_t>(trace);
}

CycleEnumeration enumerate_cycles_serial(const TransitionMatrix& a, std::size_t n, std::size_t limit) {
  if (n == 0) throw InvalidInput("enumerate_cycles: n must be >= 1");
  const auto prefixes = cycle_prefixes(a, n);
  std::vector<std::vector<SymbolicCycle>> chunks(prefixes.size());
  std::vector<char> overflowed(prefixes.size(), 0);
  std::size_t found = 0;
  for (std::size_t t = 0; t < prefixes.size() && found <= limit; ++t) {
    CycleSearch search(a, n, limit + 1 - found);
    overflowed[t] = search.run(prefixes[t], chunks[t]) ? 0 : 1;
    found += chunks[t].size() + overflowed[t];
  }
  return merge_cycle_chunks(chunks, overflowed, limit);
}

CycleEnumeration enumerate_cycles(const TransitionMatrix& a, std::size_t n, std::size_t limit) {
  if (n == 0) throw InvalidInput("enumerate_cycles: n must be >= 1");
  const auto prefixes = cycle_prefixes(a, n);
  const auto tasks = static_cast<long>(prefixes.size());
  std::vector<std::vector<SymbolicCycle>> chunks(prefixes.size());
  std::vector<char> overflowed(prefixes.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (long t = 0; t < tasks; ++t) {
    CycleSearch search(a, n, limit + 1);
    overflowed[t] = search.run(prefixes[t], chunks[t]) ? 0 : 1;
  }
  return merge_cycle_chunks(chunks, overflowed, limit);
}

PerronData perron(const TransitionMatrix& a, double rel_tol, std::size_t max_iter) {
  require_irreducible(a, "perron");
  const std::size_t n = a.size();
  auto iterate = [&](bool transpose, std::vector<double>& x) -> std::pair<double, std::size_t> {
    x.assign(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n);
    for (std::size_t it = 1; it <= max_iter; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < n; ++j)
          if (transpose ? a(j, i) : a(i, j)) s += x[j];
        y[i] = s;
      }
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0, total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double ratio = y[i] / x[i];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        total += y[i];
      }
      for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / total;
      const double root = 0.5 * (lo + hi) - 1.0;
      if (hi - lo <= rel_tol * root) return {root, it};
    }
    throw NumericalError("perron: power iteration did not converge in " + std::to_string(max_iter) + " iterations");
  };
  PerronData out;
  auto [root_r, it_r] = iterate(false, out.right);
  auto [root_l, it_l] = iterate(true, out.left);
  (void)root_l;
  out.root = root_r;
  out.iterations = std::max(it_r, it_l);
  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += out.left[i] * out.right[i];
  for (auto& u : out.left) u /= dot;
  return out;
}

double topological_entropy(const TransitionMatrix& a) { return std::log(perron(a).root); }

std::vector<std::size_t> return_time_set(const TransitionMatrix& a, std::span<const Symbol> u,
                                         std::span<const Symbol> v, std::size_t horizon) {
  if (u.empty() || v.empty()) throw InvalidInput("return_time_set: empty word");
  if (!a.admissible(u) || !a.admissible(v)) throw InvalidInput("return_time_set: word not admissible");
  std::vector<std::size_t> times;
  const std::size_t lu = u.size();
  for (std::size_t n = 0; n < lu && n <= horizon; ++n) {
    bool consistent = true;
    for (std::size_t i = n; i < lu && i - n < v.size(); ++i) consistent = consistent && (u[i] == v[i - n]);
    if (consistent) times.push_back(n);
  }
  // reach = symbols at position n reachable from the last symbol of u.
  std::uint64_t reach = bit(u.back());
  for (std::size_t n = lu; n <= horizon; ++n) {
    reach = image(a, reach);
    if (reach & bit(v.front())) times.push_back(n);
  }
  return times;
}

std::vector<std::vector<std::size_t>> irreducible_components(const TransitionMatrix& a) {
  const auto reach = closure(a);
  std::vector<std::vector<std::size_t>> comps;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((assigned & bit(i)) || !(reach[i] & bit(i))) continue;
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((reach[i] & bit(j)) && (reach[j] & bit(i))) {
        comp.push_back(j);
        assigned |= bit(j);
      }
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::optional<Word> walk_of_length(const TransitionMatrix& a, std::size_t from, std::size_t to, std::size_t steps) {
  std::vector<std::uint64_t> can(steps + 1);
  can[0] = bit(to);
  for (std::size_t k = 1; k <= steps; ++k) can[k] = preimage(a, can[k - 1]);
  if (!(can[steps] & bit(from))) return std::nullopt;
  Word w{static_cast<Symbol>(from)};
  std::size_t cur = from;
  for (std::size_t k = steps; k > 0; --k) {
    const std::uint64_t options = a.successors(cur) & can[k - 1];
    cur = static_cast<std::size_t>(std::countr_zero(options));
    w.push_back(static_cast<Symbol>(cur));
  }
  return w;
}

std::optional<Word> shortest_walk(const TransitionMatrix& a, std::size_t from, std::size_t to, std::size_t min_steps) {
  std::uint64_t reach = bit(from);
  for (std::size_t k = 0; k < min_steps; ++k) reach = image(a, reach);
  const std::size_t n = a.size();
  for (std::size_t k = min_steps; k <= min_steps + n * n; ++k) {
    if (reach & bit(to)) return walk_of_length(a, from, to, k);
    reach = image(a, reach);
  }
  return std::nullopt;
}

Word minimal_rotation(std::span<const Symbol> word) {
  const std::size_t n = word.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Symbol x = word[(r + k) % n], y = word[(best + k) % n];
      if (x < y) {
        best = r;
        break;
      }
      if (x > y) break;
    }
  }
  Word out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = word[(best + k) % n];
  return out;
}

std::size_t primitive_period(std::span<const Symbol> word) {
  const std::size_t n = word.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool invariant = true;
    for (std::size_t k = 0; k < n && invariant; ++k) invariant = word[k] == word[(k + d) % n];
    if (invariant) return d;
  }
  return n;
}

bool has_cyclic_factor(std::span<const Symbol> cycle, std::span<const Symbol> factor) {
  const std::size_t n = cycle.size();
  if (n == 0) return factor.empty();
  for (std::size_t start = 0; start < n; ++start) {
    bool match = true;
    for (std::size_t k = 0; k < factor.size() && match; ++k) match = cycle[(start + k) % n] == factor[k];
    if (match) return true;
  }
  return false;
}

std::vector<Word> admissible_words(const TransitionMatrix& a, std::size_t m) {
  std::vector<Word> out;
  if (m == 0) return out;
  Word w;
  auto extend = [&](auto&& self) -> void {
    if (w.size() == m) {
      out.push_back(w);
      return;
    }
    std::uint64_t next = w.empty() ? a.all_symbols() : a.successors(w.back());
    while (next != 0) {
      const auto s = static_cast<Symbol>(std::countr_zero(next));
      next &= next - 1;
      w.push_back(s);
      self(self);
      w.pop_back();
    }
  };
  extend(extend);
  return out;
}

}  // namespace sft
}  // namespace mixkit
