#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrix/errors.hpp"
#include "rrix/symbols.hpp"

namespace rrix {

enum class InputFormat { plain, fasta_lite };

struct IngestOptions {
  InputFormat format = InputFormat::plain;
  /// Plain format only: split records on this byte.
  std::optional<char> record_separator;
  Alphabet alphabet;
  /// Number given to the first record's sentinel; later records count up from it.
  std::uint32_t first_record = 1;
  /// Drop a single trailing "\n" or "\r\n" from plain input.
  bool trim_trailing_newline = false;
};

/// A sentinel-terminated sequence of internal codes. Every record ends in its own sentinel.
class Text {
 public:
  Text() = default;
  Text(std::vector<Symbol> symbols, std::vector<std::uint64_t> record_ends)
      : symbols_(std::move(symbols)), record_ends_(std::move(record_ends)) {}

  std::uint64_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  std::size_t record_count() const noexcept { return record_ends_.size(); }

  /// 1-based random access.
  Symbol access(std::uint64_t i) const {
    if (i == 0 || i > symbols_.size())
      fail(ErrorCode::out_of_bounds, "text position " + std::to_string(i) + " outside 1.." + std::to_string(size()));
    return symbols_[i - 1];
  }
  Symbol operator[](std::uint64_t i) const noexcept { return symbols_[i - 1]; }

  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  /// 1-based positions of the sentinels, ascending.
  std::span<const std::uint64_t> record_ends() const noexcept { return record_ends_; }

  /// Record contents as bytes, sentinels dropped.
  std::vector<std::string> records() const {
    std::vector<std::string> out;
    std::string cur;
    for (Symbol s : symbols_) {
      if (is_regular(s)) {
        cur.push_back(static_cast<char>(byte_of(s)));
      } else {
        out.push_back(std::move(cur));
        cur.clear();
      }
    }
    return out;
  }

 private:
  std::vector<Symbol> symbols_;
  std::vector<std::uint64_t> record_ends_;
};

namespace detail {

inline std::vector<std::string_view> split_records(std::string_view raw, const IngestOptions& opt) {
  std::vector<std::string_view> records;
  if (opt.format == InputFormat::plain) {
    if (opt.trim_trailing_newline && !raw.empty() && raw.back() == '\n') {
      raw.remove_suffix(1);
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    }
    if (!opt.record_separator) {
      records.push_back(raw);
      return records;
    }
    std::size_t start = 0;
    while (start <= raw.size()) {
      std::size_t end = raw.find(*opt.record_separator, start);
      if (end == std::string_view::npos) end = raw.size();
      records.push_back(raw.substr(start, end - start));
      start = end + 1;
    }
    // A trailing separator does not open an empty record.
    if (records.size() > 1 && records.back().empty()) records.pop_back();
    return records;
  }
  return records;
}

}  // namespace detail

/// Turns a byte stream into a Text, appending one sentinel per record.
inline Text ingest(std::string_view raw, const IngestOptions& opt = {}) {
  std::vector<std::string> owned;
  std::vector<std::string_view> records;
  if (opt.format == InputFormat::plain) {
    records = detail::split_records(raw, opt);
  } else {
    // fasta-lite: '>' lines open a record, header text is ignored, line breaks are dropped.
    bool open = false;
    std::size_t pos = 0;
    while (pos < raw.size()) {
      std::size_t eol = raw.find('\n', pos);
      if (eol == std::string_view::npos) eol = raw.size();
      std::string_view line = raw.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty() && line.front() == '>') {
        owned.emplace_back();
        open = true;
      } else if (!line.empty()) {
        if (!open) {
          owned.emplace_back();
          open = true;
        }
        owned.back().append(line);
      }
      pos = eol + 1;
    }
    for (const auto& r : owned) records.push_back(r);
  }

  std::vector<Symbol> symbols;
  std::vector<std::uint64_t> ends;
  std::uint64_t content = 0;
  std::uint32_t record = opt.first_record;
  for (std::string_view r : records) {
    if (r.empty()) fail(ErrorCode::empty_input, "record " + std::to_string(record) + " is empty");
    if (record == 0 || record > kMaxRecords) fail(ErrorCode::invalid_argument, "too many records");
    for (unsigned char b : r) symbols.push_back(opt.alphabet.code(b));
    content += r.size();
    symbols.push_back(sentinel(record));
    ends.push_back(symbols.size());
    ++record;
  }
  if (content == 0) fail(ErrorCode::empty_input, "no symbols after header stripping");
  return Text(std::move(symbols), std::move(ends));
}

/// Builds a Text directly from codes; the last code must be a sentinel.
inline Text text_from_symbols(std::vector<Symbol> symbols) {
  if (symbols.empty()) fail(ErrorCode::empty_input, "empty symbol sequence");
  if (is_regular(symbols.back())) fail(ErrorCode::unterminated_text, "text does not end in a sentinel");
  std::vector<std::uint64_t> ends;
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (!is_regular(symbols[i])) ends.push_back(i + 1);
  return Text(std::move(symbols), std::move(ends));
}

/// Renders codes with symbol_name (sentinels as "$k").
inline std::string render(std::span<const Symbol> symbols) {
  std::string out;
  for (Symbol s : symbols) out += symbol_name(s);
  return out;
}

}  // namespace rrix
