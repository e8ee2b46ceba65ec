#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rrix/symbols.hpp"

namespace rrix::detail {

/// Suffix array by prefix doubling, 1-based. A shorter suffix sorts before a longer one it prefixes.
inline std::vector<std::uint64_t> suffix_array(std::span<const Symbol> t) {
  const std::size_t n = t.size();
  std::vector<std::uint64_t> sa(n), rank(n), tmp(n);
  std::iota(sa.begin(), sa.end(), std::uint64_t{0});
  for (std::size_t i = 0; i < n; ++i) rank[i] = t[i];
  for (std::size_t h = 1;; h <<= 1) {
    auto key = [&](std::uint64_t i) {
      // rank + 1 so that "past the end" (0) sorts first
      return std::pair<std::uint64_t, std::uint64_t>(rank[i], i + h < n ? rank[i + h] + 1 : 0);
    };
    std::sort(sa.begin(), sa.end(), [&](std::uint64_t a, std::uint64_t b) { return key(a) < key(b); });
    tmp[sa[0]] = 0;
    for (std::size_t k = 1; k < n; ++k) tmp[sa[k]] = tmp[sa[k - 1]] + (key(sa[k - 1]) < key(sa[k]) ? 1 : 0);
    rank.swap(tmp);
    if (n == 0 || rank[sa[n - 1]] == n - 1) break;
  }
  for (auto& s : sa) ++s;
  return sa;
}

/// Kasai et al.: lcp[k] = LCP of the suffixes at ranks k and k+1 (0-based k), lcp[0] unused (0).
inline std::vector<std::uint64_t> lcp_array(std::span<const Symbol> t, std::span<const std::uint64_t> sa) {
  const std::size_t n = t.size();
  std::vector<std::uint64_t> inv(n), lcp(n, 0);
  for (std::size_t k = 0; k < n; ++k) inv[sa[k] - 1] = k;
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (inv[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[inv[i] - 1] - 1;
    while (i + h < n && j + h < n && t[i + h] == t[j + h]) ++h;
    lcp[inv[i]] = h;
    if (h > 0) --h;
  }
  return lcp;
}

}  // namespace rrix::detail
