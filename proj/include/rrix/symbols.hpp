#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>

#include "rrix/errors.hpp"

namespace rrix {

/// Internal symbol code. The code space is split in three bands:
///   0                      end marker used by reversed-orientation indexes
///   1 .. kRegularBase-1    record sentinels, sentinel(i) == i
///   kRegularBase + byte    regular symbols
/// so sentinels sort below regular bytes and among themselves by record number.
using Symbol = std::uint32_t;

inline constexpr Symbol kEndMarker = 0;
inline constexpr Symbol kRegularBase = Symbol{1} << 24;
inline constexpr std::uint32_t kMaxRecords = kRegularBase - 1;

constexpr Symbol sentinel(std::uint32_t record) noexcept { return record; }
constexpr Symbol regular(std::uint8_t byte) noexcept { return kRegularBase + byte; }

constexpr bool is_sentinel(Symbol s) noexcept { return s != kEndMarker && s < kRegularBase; }
constexpr bool is_regular(Symbol s) noexcept { return s >= kRegularBase && s < kRegularBase + 256; }
constexpr std::uint8_t byte_of(Symbol s) noexcept { return static_cast<std::uint8_t>(s - kRegularBase); }
constexpr std::uint32_t record_of(Symbol s) noexcept { return s; }

/// Human-readable rendering: regular bytes verbatim, sentinels as "$k", the end marker as "#".
inline std::string symbol_name(Symbol s) {
  if (is_regular(s)) return std::string(1, static_cast<char>(byte_of(s)));
  if (s == kEndMarker) return "#";
  return "$" + std::to_string(record_of(s));
}

/// Which bytes a text may contain. An unconfigured alphabet accepts every byte.
class Alphabet {
 public:
  Alphabet() = default;

  static Alphabet from_bytes(std::string_view allowed) {
    Alphabet a;
    a.allowed_.emplace();
    for (unsigned char b : allowed) a.allowed_->set(b);
    return a;
  }

  bool fixed() const noexcept { return allowed_.has_value(); }
  bool contains(std::uint8_t b) const noexcept { return !allowed_ || allowed_->test(b); }

  Symbol code(std::uint8_t b) const {
    if (!contains(b)) fail(ErrorCode::byte_not_in_alphabet, "byte " + std::to_string(b) + " is not in the alphabet");
    return regular(b);
  }

 private:
  std::optional<std::bitset<256>> allowed_;
};

}  // namespace rrix
