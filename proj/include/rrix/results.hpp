#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rrix/symbols.hpp"

namespace rrix {

/// One LZ77 phrase: copy `length - 1` symbols from `source`, then emit `mismatch`.
struct Lz77Phrase {
  std::optional<std::uint64_t> source;  ///< 1-based; empty for a novel single symbol
  std::uint64_t length = 1;
  Symbol mismatch = 0;

  friend bool operator==(const Lz77Phrase&, const Lz77Phrase&) = default;
};

/// p[i] and len[i] for query positions i = 1..m, stored 0-based.
/// len[i] == 0 (with p[i] == 0) marks a symbol that does not occur in the text.
struct MatchingStatistics {
  std::vector<std::uint64_t> p;
  std::vector<std::uint64_t> len;

  std::size_t size() const noexcept { return len.size(); }
  friend bool operator==(const MatchingStatistics&, const MatchingStatistics&) = default;
};

struct Mem {
  std::uint64_t query_pos = 0;
  std::uint64_t text_pos = 0;
  std::uint64_t length = 0;

  friend bool operator==(const Mem&, const Mem&) = default;
};

/// Substring S[start..start+length-1] of a query.
struct QuerySubstring {
  std::uint64_t start = 0;
  std::uint64_t length = 0;

  friend bool operator==(const QuerySubstring&, const QuerySubstring&) = default;
  friend auto operator<=>(const QuerySubstring&, const QuerySubstring&) = default;
};

}  // namespace rrix
