#pragma once

// Brute-force reference implementations. Nothing here depends on the index code;
// everything works directly on symbol sequences with 1-based positions.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "rrix/errors.hpp"
#include "rrix/results.hpp"
#include "rrix/symbols.hpp"

namespace rrix::oracle {

using Seq = std::span<const Symbol>;

/// T[a..] < T[b..] by direct comparison (a shorter suffix that is a prefix sorts first).
inline bool suffix_less(Seq t, std::uint64_t a, std::uint64_t b) {
  return std::lexicographical_compare(t.begin() + static_cast<std::ptrdiff_t>(a - 1), t.end(),
                                      t.begin() + static_cast<std::ptrdiff_t>(b - 1), t.end());
}

inline std::vector<std::uint64_t> naive_sa(Seq t) {
  std::vector<std::uint64_t> sa(t.size());
  std::iota(sa.begin(), sa.end(), std::uint64_t{1});
  std::sort(sa.begin(), sa.end(), [&](std::uint64_t a, std::uint64_t b) { return suffix_less(t, a, b); });
  return sa;
}

inline std::vector<Symbol> bwt_from_sa(Seq t, std::span<const std::uint64_t> sa) {
  std::vector<Symbol> bwt;
  bwt.reserve(sa.size());
  for (std::uint64_t s : sa) bwt.push_back(s > 1 ? t[s - 2] : t.back());
  return bwt;
}

inline std::vector<Symbol> naive_bwt(Seq t) { return bwt_from_sa(t, naive_sa(t)); }

inline std::uint64_t count_runs(Seq s) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i == 0 || s[i] != s[i - 1]) ++r;
  return r;
}

/// Length of the longest common prefix of T[a..] and T[b..].
inline std::uint64_t lcp(Seq t, std::uint64_t a, std::uint64_t b) {
  std::uint64_t l = 0;
  while (a + l <= t.size() && b + l <= t.size() && t[a + l - 1] == t[b + l - 1]) ++l;
  return l;
}

/// All start positions of p in t, ascending. The empty pattern occurs everywhere.
inline std::vector<std::uint64_t> occurrences(Seq t, Seq p) {
  std::vector<std::uint64_t> out;
  if (p.size() > t.size()) return out;
  for (std::uint64_t i = 0; i + p.size() <= t.size(); ++i)
    if (std::equal(p.begin(), p.end(), t.begin() + static_cast<std::ptrdiff_t>(i))) out.push_back(i + 1);
  return out;
}

inline bool occurs(Seq t, Seq p) {
  if (p.empty()) return true;
  return std::search(t.begin(), t.end(), p.begin(), p.end()) != t.end();
}

/// Boundary pairs (SA[k], SA[k+1]) for every k that ends a BWT run.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> boundary_pairs(Seq t) {
  auto sa = naive_sa(t);
  auto bwt = bwt_from_sa(t, sa);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t k = 0; k + 1 < bwt.size(); ++k)
    if (bwt[k] != bwt[k + 1]) out.emplace_back(sa[k], sa[k + 1]);
  std::sort(out.begin(), out.end());
  return out;
}

/// Suffixes of a text that grows by prepending, kept sorted by insertion.
/// Suffixes are identified by their distance from the end (0 = last symbol),
/// which does not change when symbols are prepended.
class SortedSuffixes {
 public:
  void prepend(Symbol c) {
    rev_.push_back(c);
    const std::uint64_t e = rev_.size() - 1;
    auto at = std::lower_bound(order_.begin(), order_.end(), e,
                               [&](std::uint64_t a, std::uint64_t b) { return less(a, b); });
    order_.insert(at, e);
  }

  std::uint64_t size() const noexcept { return rev_.size(); }

  std::vector<std::uint64_t> sa() const {
    std::vector<std::uint64_t> out;
    out.reserve(order_.size());
    for (std::uint64_t e : order_) out.push_back(size() - e);
    return out;
  }

  std::vector<Symbol> bwt() const {
    std::vector<Symbol> out;
    out.reserve(order_.size());
    for (std::uint64_t e : order_) out.push_back(e + 1 < size() ? rev_[e + 1] : rev_[0]);
    return out;
  }

  std::vector<Symbol> text() const { return {rev_.rbegin(), rev_.rend()}; }

 private:
  bool less(std::uint64_t a, std::uint64_t b) const {
    for (;; --a, --b) {
      if (rev_[a] != rev_[b]) return rev_[a] < rev_[b];
      if (a == 0 || b == 0) return a == 0 && b != 0;
    }
  }

  std::vector<Symbol> rev_;
  std::vector<std::uint64_t> order_;
};

/// Greedy LZ77. A phrase T[i..j+1] copies T[i..j], an occurrence ending at or before j-1.
/// Among the candidate occurrences (identified by their end E) the source is the one whose
/// reversed prefix T[1..E] read backwards, followed by an end marker, is smallest.
inline std::vector<Lz77Phrase> naive_lz77(Seq t) {
  const std::uint64_t n = t.size();
  // reversed prefix comparison, end marker smallest
  auto rev_less = [&](std::uint64_t e1, std::uint64_t e2) {
    for (;; --e1, --e2) {
      if (e1 == 0 || e2 == 0) return e1 == 0 && e2 != 0;
      if (t[e1 - 1] != t[e2 - 1]) return t[e1 - 1] < t[e2 - 1];
    }
  };
  std::vector<Lz77Phrase> out;
  std::uint64_t i = 1;
  while (i <= n) {
    std::uint64_t len = 0;  // copy length
    std::uint64_t best_end = 0;
    // A copy of length L must leave room for the mismatch and end before position i + L - 1.
    for (std::uint64_t want = 1; want <= n - i; ++want) {
      std::uint64_t found = 0;
      for (std::uint64_t e = want; e <= i + want - 2; ++e) {
        if (!std::equal(t.begin() + static_cast<std::ptrdiff_t>(e - want), t.begin() + static_cast<std::ptrdiff_t>(e),
                        t.begin() + static_cast<std::ptrdiff_t>(i - 1)))
          continue;
        if (found == 0 || rev_less(e, found)) found = e;
      }
      if (found == 0) break;
      len = want;
      best_end = found;
    }
    Lz77Phrase ph;
    ph.length = len + 1;
    ph.mismatch = t[i + len - 1];
    if (len > 0) ph.source = best_end - len + 1;
    out.push_back(ph);
    i += len + 1;
  }
  return out;
}

inline std::vector<Symbol> lz77_decode(std::span<const Lz77Phrase> phrases) {
  std::vector<Symbol> out;
  for (const auto& ph : phrases) {
    if (ph.length == 0) fail(ErrorCode::invalid_argument, "zero-length phrase");
    const std::uint64_t copy = ph.length - 1;
    if (copy > 0) {
      if (!ph.source || *ph.source == 0 || *ph.source > out.size())
        fail(ErrorCode::invalid_argument, "phrase source outside the decoded prefix");
      std::uint64_t src = *ph.source - 1;
      for (std::uint64_t k = 0; k < copy; ++k) out.push_back(out[src + k]);
    }
    out.push_back(ph.mismatch);
  }
  return out;
}

/// Matching statistics by dynamic programming over all (i, t) pairs.
/// p[i] is the smallest text position achieving the longest match; 0 when len is 0.
inline MatchingStatistics naive_ms(Seq s, Seq t) {
  const std::size_t m = s.size();
  const std::size_t n = t.size();
  MatchingStatistics ms;
  ms.p.assign(m, 0);
  ms.len.assign(m, 0);
  std::vector<std::uint64_t> next(n + 1, 0);
  std::vector<std::uint64_t> cur(n + 1, 0);
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t j = 0; j < n; ++j) cur[j] = s[i] == t[j] ? 1 + next[j + 1] : 0;
    cur[n] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (cur[j] > ms.len[i]) {
        ms.len[i] = cur[j];
        ms.p[i] = j + 1;
      }
    }
    std::swap(cur, next);
  }
  return ms;
}

/// Maximal exact matches of length >= min_len: S[i..i+L-1] occurs in T, is not
/// extendable to the right (L is the longest match at i) nor to the left.
inline std::vector<QuerySubstring> naive_mems(Seq s, Seq t, std::uint64_t min_len) {
  std::vector<QuerySubstring> out;
  const std::uint64_t m = s.size();
  for (std::uint64_t i = 1; i <= m; ++i) {
    std::uint64_t len = 0;
    while (i + len <= m && occurs(t, s.subspan(i - 1, len + 1))) ++len;
    if (len == 0 || len < min_len) continue;
    if (i > 1 && occurs(t, s.subspan(i - 2, len + 1))) continue;
    out.push_back({i, len});
  }
  return out;
}

/// Substrings of S absent from T whose longest proper prefix and suffix both occur.
inline std::vector<QuerySubstring> naive_minimal_absent(Seq s, Seq t) {
  std::vector<QuerySubstring> out;
  const std::uint64_t m = s.size();
  for (std::uint64_t x = 1; x <= m; ++x) {
    for (std::uint64_t len = 1; x + len - 1 <= m; ++len) {
      auto sub = s.subspan(x - 1, len);
      if (occurs(t, sub)) continue;
      // sub is the shortest absent string starting at x, so its prefix occurs
      if (occurs(t, sub.subspan(1))) out.push_back({x, len});
      break;
    }
  }
  return out;
}

}  // namespace rrix::oracle
