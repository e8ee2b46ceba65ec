#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rrix/errors.hpp"
#include "rrix/results.hpp"
#include "rrix/toehold.hpp"

namespace rrix {

/// Online greedy LZ77 parser.
///
/// After j symbols the parser holds the sampled RLBWT of T[1..j] reversed, followed by
/// an end marker, and the interval of the current phrase reversed. Each new symbol is
/// first searched (one backward step) and then prepended. The source of a phrase is the
/// occurrence whose reversed prefix is lexicographically smallest, which is the one the
/// toehold reports.
class Lz77Parser {
 public:
  Lz77Parser() { reset(); }

  /// Feeds the next symbol; returns the phrase it completes, if any.
  std::optional<Lz77Phrase> feed(Symbol c) {
    if (finalized_) fail(ErrorCode::finalized, "parser already finalized");
    if (c == kEndMarker) fail(ErrorCode::invalid_argument, "the end marker cannot occur in the text");
    if (!is_regular(c) && seen_sentinel(c)) fail(ErrorCode::sentinel_reuse, symbol_name(c) + " fed twice");

    const ToeholdCursor next = index_.step(cursor_, c);
    last_ = c;
    if (next.exhausted) {
      const std::uint64_t copy = cursor_.matched;
      Lz77Phrase ph;
      ph.length = copy + 1;
      ph.mismatch = c;
      if (copy > 0) ph.source = source_end_ + 1 - copy;
      index_.prepend(c);
      ++fed_;
      cursor_ = index_.start();
      return ph;
    }

    source_end_ = next.first_end;
    auto rec = index_.prepend(c);
    ++fed_;
    // Positions at or after the new hole shift by one; the new suffix lies inside the interval.
    const std::uint64_t k = rec.effects.new_hole;
    cursor_.interval = {std::min(next.interval.first, k), next.interval.last + 1};
    cursor_.first_end = k <= next.interval.first ? rec.new_end : next.first_end;
    cursor_.matched = next.matched;
    cursor_.exhausted = false;
    return std::nullopt;
  }

  /// Closes the parse. The last symbol fed must be a sentinel, which always ends a phrase.
  std::optional<Lz77Phrase> finalize() {
    if (finalized_) fail(ErrorCode::finalized, "parser already finalized");
    if (fed_ == 0 || is_regular(last_)) fail(ErrorCode::missing_sentinel, "text does not end in a sentinel");
    if (cursor_.matched != 0) fail(ErrorCode::internal, "open phrase after the sentinel");
    finalized_ = true;
    return std::nullopt;
  }

  std::uint64_t symbols_fed() const noexcept { return fed_; }
  std::uint64_t run_count() const { return index_.run_count(); }
  bool finalized() const noexcept { return finalized_; }

  static std::vector<Lz77Phrase> parse(std::span<const Symbol> text) {
    Lz77Parser p;
    std::vector<Lz77Phrase> out;
    for (Symbol c : text)
      if (auto ph = p.feed(c)) out.push_back(*ph);
    if (auto ph = p.finalize()) out.push_back(*ph);
    return out;
  }

 private:
  void reset() {
    index_ = SampledRlbwt();
    index_.prepend(kEndMarker);
    cursor_ = index_.start();
  }

  bool seen_sentinel(Symbol c) const { return index_.runs().count(c) > 0; }

  SampledRlbwt index_;
  ToeholdCursor cursor_;
  std::uint64_t source_end_ = 0;
  std::uint64_t fed_ = 0;
  Symbol last_ = kEndMarker;
  bool finalized_ = false;
};

/// TSV row "source<TAB>length<TAB>mismatch"; source 0 means none. The mismatch is
/// written as its byte, or as "$k" for a sentinel.
inline void write_phrase_tsv(std::ostream& out, const Lz77Phrase& ph) {
  out << ph.source.value_or(0) << '\t' << ph.length << '\t' << symbol_name(ph.mismatch) << '\n';
}

/// Binary framing: LEB128 source, LEB128 length, then the mismatch code as 4 bytes little-endian.
inline void write_phrase_binary(std::ostream& out, const Lz77Phrase& ph) {
  auto varint = [&](std::uint64_t v) {
    do {
      unsigned char b = v & 0x7f;
      v >>= 7;
      if (v != 0) b |= 0x80;
      out.put(static_cast<char>(b));
    } while (v != 0);
  };
  varint(ph.source.value_or(0));
  varint(ph.length);
  for (int k = 0; k < 4; ++k) out.put(static_cast<char>((ph.mismatch >> (8 * k)) & 0xff));
}

}  // namespace rrix
