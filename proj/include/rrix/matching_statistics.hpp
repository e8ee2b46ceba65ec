#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rrix/detail/suffix_sort.hpp"
#include "rrix/errors.hpp"
#include "rrix/r_index.hpp"
#include "rrix/results.hpp"
#include "rrix/text.hpp"

namespace rrix {

enum class Side { preceding, following };

/// Threshold for the gap between two consecutive runs of `symbol`: the earlier run
/// ends at `gap_start`, and positions gap_start..threshold belong to it.
struct ThresholdEntry {
  Symbol symbol = 0;
  std::uint64_t gap_start = 0;
  std::uint64_t threshold = 0;

  friend bool operator==(const ThresholdEntry&, const ThresholdEntry&) = default;
};

/// Immutable RLBWT of a forward text with head/tail SA samples, thresholds and
/// random access to the text.
class FrozenIndex {
 public:
  struct Run {
    Symbol symbol = 0;
    std::uint64_t head = 0;  ///< BWT position of the first symbol
    std::uint64_t length = 0;
    std::uint64_t head_sa = 0;
    std::uint64_t tail_sa = 0;

    std::uint64_t tail() const noexcept { return head + length - 1; }
    friend bool operator==(const Run&, const Run&) = default;
  };

  static FrozenIndex from_text(const Text& text) { return from_symbols(text.symbols()); }

  static FrozenIndex from_symbols(std::span<const Symbol> text) {
    if (text.empty()) fail(ErrorCode::empty_input, "empty text");
    if (is_regular(text.back())) fail(ErrorCode::unterminated_text, "text does not end in a sentinel");
    auto sa = detail::suffix_array(text);
    return from_suffix_array({text.begin(), text.end()}, sa);
  }

  /// Freezes a dynamic index; the frozen index covers exactly the text that index holds.
  static FrozenIndex from_dynamic(const DynamicRIndex& idx) {
    if (idx.empty()) fail(ErrorCode::empty_input, "empty index");
    return from_suffix_array(idx.text(), idx.suffix_array());
  }

  static FrozenIndex from_suffix_array(std::vector<Symbol> text, std::span<const std::uint64_t> sa) {
    FrozenIndex f;
    f.text_ = std::move(text);
    for (std::size_t i = 0; i < sa.size(); ++i) {
      const Symbol c = sa[i] > 1 ? f.text_[sa[i] - 2] : f.text_.back();
      if (!f.runs_.empty() && f.runs_.back().symbol == c) {
        ++f.runs_.back().length;
        f.runs_.back().tail_sa = sa[i];
      } else {
        f.runs_.push_back({c, i + 1, 1, sa[i], sa[i]});
      }
    }
    f.index_symbols();
    f.compute_thresholds(detail::lcp_array(f.text_, sa));
    return f;
  }

  /// Rebuilds from stored runs and thresholds; the text is recovered by walking LF.
  static FrozenIndex from_parts(std::vector<Run> runs, std::span<const ThresholdEntry> thresholds) {
    FrozenIndex f;
    f.runs_ = std::move(runs);
    std::uint64_t pos = 1;
    for (std::size_t k = 0; k < f.runs_.size(); ++k) {
      const Run& r = f.runs_[k];
      if (r.length == 0 || r.head != pos) fail(ErrorCode::corrupt_index, "run list is not contiguous");
      if (k > 0 && f.runs_[k - 1].symbol == r.symbol) fail(ErrorCode::corrupt_index, "adjacent runs share a symbol");
      pos += r.length;
    }
    f.index_symbols();
    const std::uint64_t n = f.size();
    for (const Run& r : f.runs_)
      if (r.head_sa == 0 || r.head_sa > n || r.tail_sa == 0 || r.tail_sa > n)
        fail(ErrorCode::corrupt_index, "SA sample outside 1..n");
    f.recover_text();
    for (const auto& e : thresholds) {
      auto it = f.symbols_.find(e.symbol);
      if (it == f.symbols_.end()) fail(ErrorCode::corrupt_index, "threshold for an absent symbol");
      auto& sr = it->second;
      auto gap = std::lower_bound(sr.runs.begin(), sr.runs.end(), e.gap_start,
                                  [&](std::uint32_t id, std::uint64_t pos) { return f.runs_[id].tail() < pos; });
      if (gap == sr.runs.end() || gap + 1 == sr.runs.end() || f.runs_[*gap].tail() != e.gap_start)
        fail(ErrorCode::corrupt_index, "threshold outside any gap");
      const std::size_t g = static_cast<std::size_t>(gap - sr.runs.begin());
      if (e.threshold < e.gap_start || e.threshold >= f.runs_[sr.runs[g + 1]].head)
        fail(ErrorCode::corrupt_index, "threshold outside its gap");
      sr.thresholds[g] = e.threshold;
    }
    for (const auto& [c, sr] : f.symbols_)
      for (auto thr : sr.thresholds)
        if (thr == 0) fail(ErrorCode::corrupt_index, "missing threshold for " + symbol_name(c));
    return f;
  }

  std::uint64_t size() const noexcept { return runs_.empty() ? 0 : runs_.back().tail(); }
  std::uint64_t run_count() const noexcept { return runs_.size(); }
  const std::vector<Run>& runs() const noexcept { return runs_; }
  std::span<const Symbol> text() const noexcept { return text_; }

  Symbol text_at(std::uint64_t i) const {
    if (i == 0 || i > text_.size()) fail(ErrorCode::out_of_bounds, "text position " + std::to_string(i));
    return text_[i - 1];
  }

  /// All thresholds, ordered by symbol then by gap.
  std::vector<ThresholdEntry> thresholds() const {
    std::vector<ThresholdEntry> out;
    for (const auto& [c, sr] : symbols_)
      for (std::size_t g = 0; g < sr.thresholds.size(); ++g) out.push_back({c, runs_[sr.runs[g]].tail(), sr.thresholds[g]});
    return out;
  }

  /// Index (0-based) of the run containing BWT position i.
  std::size_t run_index(std::uint64_t i) const {
    if (i == 0 || i > size()) fail(ErrorCode::out_of_bounds, "BWT position " + std::to_string(i));
    auto it = std::upper_bound(runs_.begin(), runs_.end(), i, [](std::uint64_t p, const Run& r) { return p < r.head; });
    return static_cast<std::size_t>(it - runs_.begin()) - 1;
  }

  Symbol bwt_at(std::uint64_t i) const { return runs_[run_index(i)].symbol; }

  std::uint64_t count(Symbol c) const {
    auto it = symbols_.find(c);
    return it == symbols_.end() ? 0 : it->second.cumulative.back();
  }

  std::uint64_t rank(Symbol c, std::uint64_t i) const {
    if (i == 0) return 0;
    auto it = symbols_.find(c);
    if (it == symbols_.end()) return 0;
    const std::size_t x = run_index(i);
    const auto& sr = it->second;
    const std::size_t before = c_runs_before(sr, x);
    std::uint64_t r = sr.cumulative[before];
    if (runs_[x].symbol == c) r += i - runs_[x].head + 1;
    return r;
  }

  std::uint64_t lf(std::uint64_t i) const {
    const Symbol c = bwt_at(i);
    return symbols_.at(c).less + rank(c, i);
  }

  /// Which neighbouring run of c (before or after position i) shares the longer
  /// prefix with c·T[SA[i]..]. Forced when c occurs on one side only.
  Side query_threshold(std::uint64_t i, Symbol c) const {
    auto it = symbols_.find(c);
    if (it == symbols_.end()) fail(ErrorCode::symbol_absent, symbol_name(c) + " does not occur in the BWT");
    const auto& sr = it->second;
    const std::size_t x = run_index(i);
    if (runs_[x].symbol == c) return Side::preceding;
    const std::size_t before = c_runs_before(sr, x);
    if (before == 0) return Side::following;
    if (before == sr.runs.size()) return Side::preceding;
    return i <= sr.thresholds[before - 1] ? Side::preceding : Side::following;
  }

  /// Nearest c-run before, and after, the run holding BWT position i.
  const Run& preceding_run(Symbol c, std::uint64_t i) const {
    const auto& sr = symbols_.at(c);
    return runs_[sr.runs[c_runs_before(sr, run_index(i)) - 1]];
  }
  const Run& following_run(Symbol c, std::uint64_t i) const {
    const auto& sr = symbols_.at(c);
    const std::size_t x = run_index(i);
    std::size_t k = c_runs_before(sr, x);
    if (k < sr.runs.size() && sr.runs[k] == x) ++k;
    return runs_[sr.runs[k]];
  }

 private:
  struct SymbolRuns {
    std::vector<std::uint32_t> runs;         ///< run ids in BWT order
    std::vector<std::uint64_t> cumulative;   ///< cumulative[k] = length of runs[0..k)
    std::vector<std::uint64_t> thresholds;   ///< one per gap between runs[k] and runs[k+1]
    std::uint64_t less = 0;                  ///< C(c)
  };

  static std::size_t c_runs_before(const SymbolRuns& sr, std::size_t x) {
    return static_cast<std::size_t>(std::lower_bound(sr.runs.begin(), sr.runs.end(), x) - sr.runs.begin());
  }

  void index_symbols() {
    symbols_.clear();
    for (std::size_t k = 0; k < runs_.size(); ++k) {
      auto& sr = symbols_[runs_[k].symbol];
      if (sr.cumulative.empty()) sr.cumulative.push_back(0);
      sr.runs.push_back(static_cast<std::uint32_t>(k));
      sr.cumulative.push_back(sr.cumulative.back() + runs_[k].length);
    }
    std::uint64_t acc = 0;
    for (auto& [c, sr] : symbols_) {
      sr.less = acc;
      acc += sr.cumulative.back();
      sr.thresholds.assign(sr.runs.size() - 1, 0);
    }
  }

  /// lcp[k] (0-based) is the LCP of the suffixes at ranks k and k+1, 1-based.
  void compute_thresholds(const std::vector<std::uint64_t>& lcp) {
    std::vector<std::uint64_t> right;
    for (auto& [c, sr] : symbols_) {
      for (std::size_t g = 0; g + 1 < sr.runs.size(); ++g) {
        const std::uint64_t h = runs_[sr.runs[g]].tail();
        const std::uint64_t j = runs_[sr.runs[g + 1]].head;
        // right[x - h] = LCP(x, j) = min lcp over ranks x+1..j
        right.assign(j - h + 1, 0);
        std::uint64_t m = ~std::uint64_t{0};
        for (std::uint64_t x = j; x-- > h;) {
          m = std::min(m, lcp[x]);
          right[x - h] = m;
        }
        std::uint64_t thr = h;
        std::uint64_t left = ~std::uint64_t{0};
        for (std::uint64_t x = h + 1; x < j; ++x) {
          left = std::min(left, lcp[x - 1]);
          if (left < right[x - h]) break;
          thr = x;
        }
        sr.thresholds[g] = thr;
      }
    }
  }

  void recover_text() {
    const std::uint64_t n = size();
    text_.assign(n, 0);
    // The hole (SA = 1) holds the terminal; its one-symbol suffix is the first of its block.
    const Run* hole = nullptr;
    for (const Run& r : runs_)
      if (r.head_sa == 1) hole = &r;
    if (hole == nullptr || hole->length != 1) fail(ErrorCode::corrupt_index, "no singleton run with SA = 1");
    const Symbol terminal = hole->symbol;
    if (count(terminal) != 1) fail(ErrorCode::corrupt_index, "terminal symbol is not unique");
    text_[n - 1] = terminal;
    std::uint64_t q = symbols_.at(terminal).less + 1;  // row of the suffix "terminal"
    for (std::uint64_t pos = n - 1; pos >= 1; --pos) {
      const Symbol c = bwt_at(q);
      if (c == terminal) fail(ErrorCode::corrupt_index, "LF walk reached the terminal early");
      text_[pos - 1] = c;
      q = lf(q);
    }
  }

  std::vector<Run> runs_;
  std::map<Symbol, SymbolRuns> symbols_;
  std::vector<Symbol> text_;
};

struct LsCounters {
  std::uint64_t comparisons = 0;   ///< symbol comparisons S[..] == T[..]
  std::uint64_t guard_checks = 0;  ///< bound checks that stopped an extension
};

/// Algorithm 1: p values, scanning S right to left. q starts at the head of run 1.
/// A symbol that does not occur in T gets p = 0 and restarts the scan state.
inline std::vector<std::uint64_t> compute_ps(const FrozenIndex& idx, std::span<const Symbol> s) {
  const std::uint64_t n = idx.size();
  const auto& runs = idx.runs();
  auto before = [n](std::uint64_t sa) { return sa == 1 ? n : sa - 1; };
  std::vector<std::uint64_t> p(s.size(), 0);
  std::uint64_t q = 1;
  std::uint64_t t = before(runs.front().head_sa);
  for (std::size_t i = s.size(); i-- > 0;) {
    const Symbol c = s[i];
    if (idx.count(c) == 0) {
      p[i] = 0;
      q = 1;
      t = before(runs.front().head_sa);
      continue;
    }
    if (idx.bwt_at(q) != c) {
      if (idx.query_threshold(q, c) == Side::preceding) {
        const auto& r = idx.preceding_run(c, q);
        q = r.tail();
        t = r.tail_sa - 1;
      } else {
        const auto& r = idx.following_run(c, q);
        q = r.head;
        t = r.head_sa - 1;
      }
    }
    p[i] = t;
    q = idx.lf(q);
    t = t == 1 ? n : t - 1;
  }
  return p;
}

/// Algorithm 2: lengths from the p values by direct comparison, reusing l[i-1] - 1.
inline std::vector<std::uint64_t> compute_ls(const FrozenIndex& idx, std::span<const Symbol> s,
                                             std::span<const std::uint64_t> p, LsCounters* counters = nullptr) {
  const std::uint64_t m = s.size();
  const std::uint64_t n = idx.size();
  const auto t = idx.text();
  std::vector<std::uint64_t> len(m, 0);
  std::uint64_t prev = 1;
  LsCounters local;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (p[i] == 0) {
      prev = 0;
      continue;
    }
    std::uint64_t l = prev > 0 ? prev - 1 : 0;
    for (;;) {
      if (i + l >= m || p[i] + l > n) {
        ++local.guard_checks;
        break;
      }
      ++local.comparisons;
      if (s[i + l] != t[p[i] + l - 1]) break;
      ++l;
    }
    len[i] = l;
    prev = l;
  }
  if (counters) *counters = local;
  return len;
}

inline MatchingStatistics matching_statistics(const FrozenIndex& idx, std::span<const Symbol> s,
                                              LsCounters* counters = nullptr) {
  MatchingStatistics ms;
  ms.p = compute_ps(idx, s);
  ms.len = compute_ls(idx, s, ms.p, counters);
  return ms;
}

/// Left-maximal entries of the matching statistics with length >= min_len (and >= 1).
inline std::vector<Mem> mems(const MatchingStatistics& ms, std::uint64_t min_len) {
  std::vector<Mem> out;
  const std::uint64_t floor = std::max<std::uint64_t>(min_len, 1);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms.len[i] < floor) continue;
    if (i > 0 && ms.len[i - 1] == ms.len[i] + 1) continue;
    out.push_back({i + 1, ms.p[i], ms.len[i]});
  }
  return out;
}

/// Minimal substrings of S that do not occur in T. S[x..x+l_x] is absent by definition
/// of l_x; it is minimal exactly when S[x+1..x+l_x] occurs, i.e. l_{x+1} >= l_x.
inline std::vector<QuerySubstring> minimal_absent(const FrozenIndex& idx, std::span<const Symbol> s,
                                                  const MatchingStatistics& ms) {
  for (Symbol c : s)
    if (idx.count(c) == 0) fail(ErrorCode::symbol_absent_from_text, symbol_name(c) + " does not occur in the text");
  std::vector<QuerySubstring> out;
  const std::uint64_t m = s.size();
  for (std::uint64_t x = 0; x < m; ++x) {
    const std::uint64_t l = ms.len[x];
    if (x + l >= m) continue;
    if (ms.len[x + 1] >= l) out.push_back({x + 1, l + 1});
  }
  return out;
}

}  // namespace rrix
