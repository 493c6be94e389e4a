#include "mixkit/lpp.hpp"

#include <algorithm>
#include <optional>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "mixkit/errors.hpp"

namespace mixkit::lpp {
namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

// Maps admissible m-words to their index in the lexicographic list. Uses a
// flat table when size^m is small, a hash map otherwise.
class WordIndex {
 public:
  explicit WordIndex(const std::vector<Word>& words, std::size_t alphabet) : base_(alphabet) {
    std::size_t m = words.empty() ? 0 : words.front().size();
    std::uint64_t range = 1;
    bool small = true;
    for (std::size_t i = 0; i < m && small; ++i) {
      range *= base_;
      small = range <= (std::uint64_t{1} << 20);
    }
    if (small) table_.assign(range, npos);
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (small)
        table_[key(words[i])] = i;
      else
        ids_.emplace(key(words[i]), i);
    }
  }
  std::size_t find(std::span<const Symbol> w) const {
    const std::uint64_t k = key(w);
    if (!table_.empty()) return table_[k];
    const auto it = ids_.find(k);
    return it == ids_.end() ? npos : it->second;
  }

 private:
  std::uint64_t key(std::span<const Symbol> w) const {
    std::uint64_t k = 0;
    for (Symbol s : w) k = k * base_ + s;
    return k;
  }

  std::uint64_t base_;
  std::vector<std::size_t> table_;
  std::unordered_map<std::uint64_t, std::size_t> ids_;
};

struct Covering {
  Word linear;   // contains every m-word as a (non-wrapping) factor
  Word closing;  // interior of the walk from linear.back() back to linear.front()
};

// Breadth-first distances (in >= 1 steps) from `from`.
std::vector<std::size_t> distances_from(const TransitionMatrix& a, std::size_t from) {
  std::vector<std::size_t> dist(a.size(), npos);
  std::queue<std::size_t> queue;
  std::uint64_t succ = a.successors(from);
  while (succ != 0) {
    const auto v = static_cast<std::size_t>(std::countr_zero(succ));
    succ &= succ - 1;
    dist[v] = 1;
    queue.push(v);
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop();
    std::uint64_t next = a.successors(u);
    while (next != 0) {
      const auto v = static_cast<std::size_t>(std::countr_zero(next));
      next &= next - 1;
      if (dist[v] == npos) {
        dist[v] = dist[u] + 1;
        queue.push(v);
      }
    }
  }
  return dist;
}

std::optional<Covering> build_covering(const TransitionMatrix& a, std::size_t m, const std::vector<Word>& words) {
  if (words.empty()) return std::nullopt;
  const WordIndex index(words, a.size());
  std::vector<char> covered(words.size(), 0);
  std::size_t remaining = words.size();
  Covering cov;
  cov.linear = words.front();
  std::size_t marked_until = 0;  // windows starting before this index are marked
  auto mark_new = [&] {
    for (; marked_until + m <= cov.linear.size(); ++marked_until) {
      const std::size_t id = index.find(std::span(cov.linear).subspan(marked_until, m));
      if (id != npos && !covered[id]) {
        covered[id] = 1;
        --remaining;
      }
    }
  };
  mark_new();
  while (remaining > 0) {
    const Symbol last = cov.linear.back();
    bool extended = false;
    std::uint64_t succ = a.successors(last);
    while (succ != 0 && !extended) {
      const auto s = static_cast<Symbol>(std::countr_zero(succ));
      succ &= succ - 1;
      Word probe(cov.linear.end() - static_cast<long>(m - 1), cov.linear.end());
      probe.push_back(s);
      const std::size_t id = index.find(probe);
      if (id != npos && !covered[id]) {
        cov.linear.push_back(s);
        extended = true;
      }
    }
    if (!extended) {
      const auto dist = distances_from(a, last);
      std::size_t best = npos;
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (covered[i] || dist[words[i].front()] == npos) continue;
        if (best == npos || dist[words[i].front()] < dist[words[best].front()]) best = i;
      }
      if (best == npos) return std::nullopt;
      const auto walk = sft::walk_of_length(a, last, words[best].front(), dist[words[best].front()]);
      cov.linear.insert(cov.linear.end(), walk->begin() + 1, walk->end());
      cov.linear.insert(cov.linear.end(), words[best].begin() + 1, words[best].end());
    }
    mark_new();
  }
  if (!a(cov.linear.back(), cov.linear.front())) {
    const auto back = sft::shortest_walk(a, cov.linear.back(), cov.linear.front(), 1);
    if (!back) return std::nullopt;
    cov.closing.assign(back->begin() + 1, back->end() - 1);
  }
  return cov;
}

LppWitness make_witness(Word word, const char* route) {
  LppWitness w;
  w.primitive_period = sft::primitive_period(word);
  w.word = std::move(word);
  w.route = route;
  return w;
}

// Depth-first search for a dense cyclic word of length n that starts with the
// first admissible m-word (every dense cycle has such a rotation).
class DenseSearch {
 public:
  DenseSearch(const TransitionMatrix& a, std::size_t m, const std::vector<Word>& words, std::size_t n,
              std::size_t budget)
      : a_(a), m_(m), words_(words), index_(words, a.size()), n_(n), budget_(budget), count_(words.size(), 0) {
    // Memo keys are exact: covered set as a bit mask and (depth, suffix) packed in 64 bits.
    const double bits = std::log2(static_cast<double>(n + 1)) +
                        static_cast<double>(m - 1) * std::log2(static_cast<double>(a.size()));
    memo_enabled_ = words.size() <= 64 && bits < 63;
  }

  WitnessOutcome run() {
    const Word& start = words_.front();
    can_close_.assign(n_ + 2, 0);
    can_close_[0] = bit(start.front());
    for (std::size_t k = 1; k < can_close_.size(); ++k) {
      std::uint64_t pre = 0, set = can_close_[k - 1];
      while (set != 0) {
        const auto j = static_cast<std::size_t>(std::countr_zero(set));
        set &= set - 1;
        pre |= a_.predecessors(j);
      }
      can_close_[k] = pre;
    }
    word_ = start;
    add_window(0, +1);
    WitnessOutcome out;
    if (!(can_close_[n_ - m_ + 1] & bit(word_.back()))) {
      out.status = WitnessStatus::none;
      out.reason = "no cycle of this length through the first m-word";
      return out;
    }
    const bool done = descend();
    if (found_) {
      out.status = WitnessStatus::found;
      out.witness = make_witness(word_, "search");
    } else if (done) {
      out.status = WitnessStatus::none;
      out.reason = "exhaustive search found no dense cycle";
    } else {
      out.status = WitnessStatus::unknown;
      out.reason = "search budget exhausted";
    }
    return out;
  }

 private:
  void add_window(std::size_t start, int delta) {
    const std::size_t id = index_.find(std::span(word_).subspan(start, m_));
    if (id == npos) return;
    if (delta > 0 && count_[id]++ == 0) {
      ++distinct_;
      if (id < 64) covered_ |= bit(id);
    }
    if (delta < 0 && --count_[id] == 0) {
      --distinct_;
      if (id < 64) covered_ &= ~bit(id);
    }
  }

  // Returns false when the node budget ran out.
  bool descend() {
    if (++nodes_ > budget_) return false;
    const std::size_t d = word_.size();
    const std::size_t uncovered = words_.size() - distinct_;
    const std::size_t windows_left = n_ - (d - m_ + 1);
    if (uncovered > windows_left) return true;
    // The rest of the search depends only on (depth, last m-1 symbols, covered set).
    MemoKey memo_key{covered_, d};
    if (memo_enabled_ && d < n_) {
      for (std::size_t k = d + 1 - m_; k < d; ++k) memo_key.second = memo_key.second * a_.size() + word_[k];
      if (failed_.contains(memo_key)) return true;
    }
    if (d == n_) {
      if (!a_(word_.back(), word_.front())) return true;
      std::size_t extra_count = 0;
      for (std::size_t s = n_ - m_ + 1; s < n_; ++s) {
        Word& win = scratch_;
        win.clear();
        for (std::size_t k = 0; k < m_; ++k) win.push_back(word_[(s + k) % n_]);
        const std::size_t id = index_.find(win);
        if (id != npos && count_[id] == 0) {
          ++count_[id];
          ++extra_count;
          touched_.push_back(id);
        }
      }
      for (std::size_t id : touched_) --count_[id];
      touched_.clear();
      if (distinct_ + extra_count == words_.size()) found_ = true;
      return true;
    }
    std::uint64_t next = a_.successors(word_.back()) & can_close_[n_ - d];
    while (next != 0 && !found_) {
      const auto s = static_cast<Symbol>(std::countr_zero(next));
      next &= next - 1;
      word_.push_back(s);
      add_window(word_.size() - m_, +1);
      const bool ok = descend();
      if (found_) return true;
      add_window(word_.size() - m_, -1);
      word_.pop_back();
      if (!ok) return false;
    }
    if (memo_enabled_ && !found_) failed_.insert(memo_key);
    return true;
  }

  const TransitionMatrix& a_;
  std::size_t m_;
  const std::vector<Word>& words_;
  WordIndex index_;
  std::size_t n_;
  std::size_t budget_;
  std::vector<std::size_t> count_;
  std::size_t distinct_ = 0;
  std::size_t nodes_ = 0;
  bool found_ = false;
  std::vector<std::uint64_t> can_close_;
  Word word_;
  Word scratch_;
  std::vector<std::size_t> touched_;
  std::uint64_t covered_ = 0;
  bool memo_enabled_ = false;
  using MemoKey = std::pair<std::uint64_t, std::uint64_t>;
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ULL ^ k.second);
    }
  };
  std::unordered_set<MemoKey, MemoHash> failed_;
};

}  // namespace

std::size_t word_length_for(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidInput("epsilon must lie in (0, 1]");
  std::size_t m = 1;
  while (std::ldexp(1.0, -static_cast<int>(m)) > epsilon) {
    if (++m > 30) throw InvalidInput("epsilon too small (needs words longer than 30)");
  }
  return m;
}

std::optional<Word> covering_cycle(const TransitionMatrix& a, std::size_t m) {
  auto cov = build_covering(a, m, sft::admissible_words(a, m));
  if (!cov) return std::nullopt;
  Word cyc = cov->linear;
  cyc.insert(cyc.end(), cov->closing.begin(), cov->closing.end());
  return cyc;
}

bool is_dense(const TransitionMatrix& a, std::span<const Symbol> cycle, std::size_t m) {
  if (!a.admissible_cyclic(cycle)) return false;
  for (const Word& w : sft::admissible_words(a, m))
    if (!sft::has_cyclic_factor(cycle, w)) return false;
  return true;
}

WitnessFactory::WitnessFactory(const TransitionMatrix& a, std::size_t m, std::size_t n_max, LppOptions options)
    : a_(a), m_(m), n_max_(n_max), options_(options), words_(sft::admissible_words(a, m)) {
  irreducible_ = sft::is_irreducible(a);
  has_closed_walk_.assign(n_max + 1, 0);
  {
    std::vector<std::uint64_t> base(a.size()), power(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) base[i] = power[i] = a.successors(i);
    for (std::size_t n = 1; n <= n_max; ++n) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (power[i] & bit(i)) has_closed_walk_[n] = 1;
      std::vector<std::uint64_t> next(a.size(), 0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t row = power[i];
        while (row != 0) {
          const auto k = static_cast<std::size_t>(std::countr_zero(row));
          row &= row - 1;
          next[i] |= base[k];
        }
      }
      power = std::move(next);
    }
  }
  if (!irreducible_) return;
  const auto cov = build_covering(a, m, words_);
  if (!cov) return;
  covering_ = cov->linear;
  linear_length_ = cov->linear.size();
  covering_.insert(covering_.end(), cov->closing.begin(), cov->closing.end());

  // Padding loops are inserted outside the linear covering stretch, so the
  // m-word factors stay intact: before linear[0] or after a closing symbol.
  std::vector<std::size_t> anchors{cov->linear.front()};
  for (Symbol s : cov->closing) anchors.push_back(s);
  std::ranges::sort(anchors);
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  const std::size_t max_loop = std::max<std::size_t>(2 * a.size(), 1);
  loops_.assign(max_loop + 1, std::nullopt);
  for (std::size_t j = 1; j <= max_loop; ++j)
    for (std::size_t s : anchors)
      if (auto w = sft::walk_of_length(a, s, s, j)) {
        loops_[j] = std::move(w);
        break;
      }
  pad_choice_.assign(n_max + 1, npos);
  pad_choice_[0] = 0;
  for (std::size_t k = 1; k <= n_max; ++k)
    for (std::size_t j = 1; j <= std::min(k, max_loop); ++j)
      if (loops_[j] && pad_choice_[k - j] != npos) {
        pad_choice_[k] = j;
        break;
      }
}

std::optional<LppWitness> WitnessFactory::splice(std::size_t n) const {
  if (covering_.empty() || n < covering_.size() || n > n_max_) return std::nullopt;
  std::size_t k = n - covering_.size();
  if (pad_choice_[k] == npos) return std::nullopt;
  Word word = covering_;
  std::size_t linear_begin = 0;
  while (k > 0) {
    const std::size_t j = pad_choice_[k];
    const Word& loop = *loops_[j];
    bool inserted = false;
    for (std::size_t i = word.size(); i-- > linear_begin + linear_length_;) {
      if (word[i] == loop.front()) {
        word.insert(word.begin() + static_cast<long>(i) + 1, loop.begin() + 1, loop.end());
        inserted = true;
        break;
      }
    }
    if (!inserted) {
      word.insert(word.begin(), loop.begin(), loop.end() - 1);
      linear_begin += j;
    }
    k -= j;
  }
  return make_witness(std::move(word), "splice");
}

WitnessOutcome WitnessFactory::search(std::size_t n) const {
  WitnessOutcome out;
  if (n < m_) {
    const auto cycles = sft::enumerate_cycles_serial(a_, n, options_.search_nodes);
    for (const auto& c : cycles.cycles) {
      if (is_dense(a_, c.states, m_)) {
        out.status = WitnessStatus::found;
        out.witness = make_witness(c.states, "search");
        return out;
      }
    }
    out.status = cycles.truncated ? WitnessStatus::unknown : WitnessStatus::none;
    out.reason = cycles.truncated ? "cycle enumeration truncated" : "no cycle of this length is dense";
    return out;
  }
  return DenseSearch(a_, m_, words_, n, options_.search_nodes).run();
}

WitnessOutcome WitnessFactory::evaluate(std::size_t n) const {
  WitnessOutcome out;
  out.status = WitnessStatus::none;
  if (n == 0 || n > n_max_) {
    out.status = WitnessStatus::unknown;
    out.reason = "period outside the horizon";
  } else if (!irreducible_) {
    out.reason = "reducible matrix: no cycle visits every symbol";
  } else if (n < words_.size()) {
    out.reason = "fewer positions than admissible m-words";
  } else if (!has_closed_walk_[n]) {
    out.reason = "no periodic points of this period";
  } else if (auto w = splice(n)) {
    out.status = WitnessStatus::found;
    out.witness = std::move(w);
  } else {
    out = search(n);
  }
  return out;
}

std::vector<WitnessOutcome> witness_scan(const WitnessFactory& factory, const std::vector<std::size_t>& periods) {
  std::vector<WitnessOutcome> out(periods.size());
  const auto count = static_cast<std::int64_t>(periods.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = factory.evaluate(periods[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<WitnessOutcome> witness_scan_serial(const WitnessFactory& factory,
                                                const std::vector<std::size_t>& periods) {
  std::vector<WitnessOutcome> out;
  out.reserve(periods.size());
  for (std::size_t n : periods) out.push_back(factory.evaluate(n));
  return out;
}

LppResult lpp_certificate(const TransitionMatrix& a, double epsilon, std::size_t n_max, LppOptions options) {
  const std::size_t m = word_length_for(epsilon);
  if (n_max == 0) throw InvalidInput("n_max must be positive");
  if (options.batch == 0) options.batch = 1;
  const WitnessFactory factory(a, m, n_max, options);
  LppRefutation ref;
  ref.epsilon = epsilon;
  ref.m = m;
  if (!sft::is_irreducible(a)) {
    ref.blocking_n = n_max;
    ref.exhaustive = true;
    ref.reason = "reducible matrix: no cycle visits every symbol";
    return ref;
  }
  if (n_max < factory.covering_length())
    throw HorizonTooSmall("n_max = " + std::to_string(n_max) + " is below the covering cycle length " +
                          std::to_string(factory.covering_length()));

  LppCertificate cert;
  cert.epsilon = epsilon;
  cert.m = m;
  cert.n_max = n_max;
  cert.covering_length = factory.covering_length();
  for (std::size_t s = 0; s < a.size(); ++s) cert.alphabet.push_back(s);

  if (sft::is_primitive(a)) {
    std::size_t hi = n_max;
    while (hi >= 1) {
      const std::size_t lo = hi >= options.batch ? hi - options.batch + 1 : 1;
      std::vector<std::size_t> periods;
      for (std::size_t n = hi; n >= lo; --n) periods.push_back(n);
      const auto outcomes = witness_scan(factory, periods);
      for (std::size_t i = 0; i < periods.size(); ++i) {
        if (outcomes[i].status != WitnessStatus::found) {
          if (periods[i] == n_max) {
            ref.blocking_n = n_max;
            ref.exhaustive = outcomes[i].status == WitnessStatus::none;
            ref.reason = outcomes[i].reason;
            return ref;
          }
          cert.n0 = periods[i] + 1;
          return cert;
        }
        cert.witnesses.emplace(periods[i], *outcomes[i].witness);
      }
      if (lo == 1) break;
      hi = lo - 1;
    }
    cert.n0 = 1;
    return cert;
  }

  // Not primitive: some period after the first success has no witness.
  bool seen_success = false;
  for (std::size_t lo = 1; lo <= n_max; lo += options.batch) {
    std::vector<std::size_t> periods;
    for (std::size_t n = lo; n < lo + options.batch && n <= n_max; ++n) periods.push_back(n);
    const auto outcomes = witness_scan(factory, periods);
    for (std::size_t i = 0; i < periods.size(); ++i) {
      if (outcomes[i].status == WitnessStatus::found) {
        seen_success = true;
      } else if (seen_success) {
        ref.blocking_n = periods[i];
        ref.exhaustive = outcomes[i].status == WitnessStatus::none;
        ref.reason = outcomes[i].reason;
        return ref;
      }
    }
  }
  ref.blocking_n = n_max;
  ref.exhaustive = false;
  ref.reason = "no blocking period found below the horizon";
  return ref;
}

LppResult homoclinic_lpp_check(const TransitionMatrix& a, std::span<const Symbol> p, double epsilon,
                               std::size_t n_max, LppOptions options) {
  if (p.empty() || !a.admissible_cyclic(p)) throw InvalidInput("periodic word is not an admissible cycle");
  for (const auto& comp : sft::irreducible_components(a)) {
    if (!std::ranges::binary_search(comp, std::size_t{p.front()})) continue;
    const TransitionMatrix sub = a.restricted(comp);
    LppResult result = lpp_certificate(sub, epsilon, n_max, options);
    if (auto* cert = std::get_if<LppCertificate>(&result)) {
      for (auto& [n, w] : cert->witnesses)
        for (Symbol& s : w.word) s = static_cast<Symbol>(comp[s]);
      cert->alphabet = comp;
    }
    return result;
  }
  throw InvalidInput("periodic word lies in no irreducible component");
}

const LppCertificate& expect_certificate(const LppResult& result) {
  if (const auto* ref = std::get_if<LppRefutation>(&result))
    throw PreconditionError("large periods property fails at n = " + std::to_string(ref->blocking_n) + ": " +
                            ref->reason);
  return std::get<LppCertificate>(result);
}

MixingReport verify_mixing_from_lpp(const TransitionMatrix& a, const LppCertificate& cert,
                                    const std::vector<std::pair<Word, Word>>& pairs) {
  MixingReport report;
  for (const auto& [u, v] : pairs) {
    if (u.size() > cert.m || v.size() > cert.m) throw InvalidInput("cylinder longer than the certificate word length");
    MixingPairReport pr;
    pr.u = u;
    pr.v = v;
    const auto back = sft::return_time_set(a, v, u, cert.n_max);
    const auto first = std::ranges::find_if(back, [](std::size_t n) { return n >= 1; });
    if (first == back.end()) {
      pr.misses.push_back(0);
      report.all_hit = false;
      report.pairs.push_back(std::move(pr));
      continue;
    }
    pr.first_hit = *first;
    // Ball: v followed by a connecting path that puts u at offset n1.
    pr.ball_m = std::max(v.size(), pr.first_hit + u.size());
    const LppCertificate* use = &cert;
    std::optional<LppCertificate> refined;
    if (pr.ball_m > cert.m) {
      try {
        auto r = lpp_certificate(a, std::ldexp(1.0, -static_cast<int>(pr.ball_m)), cert.n_max);
        if (auto* c = std::get_if<LppCertificate>(&r)) refined = std::move(*c);
      } catch (const PreconditionError&) {
      } catch (const InvalidInput&) {
      }
      if (refined) use = &*refined;
    }
    const std::size_t n0 = pr.ball_m > use->m ? cert.n_max + 1 : use->n0;
    pr.threshold = n0 > pr.first_hit + 1 ? n0 - pr.first_hit : 1;
    const auto forward = sft::return_time_set(a, u, v, cert.n_max);
    const std::size_t top = cert.n_max >= pr.first_hit ? cert.n_max - pr.first_hit : 0;
    for (std::size_t n = 1; n <= top; ++n) {
      pr.checked_until = n;
      bool hit = false;
      if (n < pr.threshold) {
        if (!std::ranges::binary_search(forward, n)) pr.early_misses.push_back(n);
        continue;
      }
      if (auto it = use->witnesses.find(n + pr.first_hit); it != use->witnesses.end()) {
        const Word& w = it->second.word;
        const std::size_t period = w.size();
        for (std::size_t j = 0; j < period && !hit; ++j) {
          bool ok = true;
          for (std::size_t i = 0; i < v.size() && ok; ++i) ok = w[(j + i) % period] == v[i];
          for (std::size_t i = 0; i < u.size() && ok; ++i) ok = w[(j + pr.first_hit + i) % period] == u[i];
          hit = ok;
        }
      }
      if (hit) {
        ++pr.witness_hits;
      } else if (std::ranges::binary_search(forward, n)) {
        ++pr.direct_hits;
      } else {
        pr.misses.push_back(n);
        report.all_hit = false;
      }
    }
    report.pairs.push_back(std::move(pr));
  }
  return report;
}

}  // namespace mixkit::lpp
