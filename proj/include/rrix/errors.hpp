#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rrix {

enum class ErrorCode {
  empty_input,
  byte_not_in_alphabet,
  out_of_bounds,
  no_such_occurrence,
  not_singleton_run,
  invalid_argument,
  hole_position,
  sentinel_reuse,
  inconsistent_effects,
  missing_sa_next,
  no_predecessor,
  finalized,
  missing_sentinel,
  unterminated_text,
  symbol_absent,
  symbol_absent_from_text,
  io,
  bad_magic,
  bad_version,
  corrupt_index,
  internal,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::byte_not_in_alphabet: return "ByteNotInAlphabet";
    case ErrorCode::out_of_bounds: return "OutOfBounds";
    case ErrorCode::no_such_occurrence: return "NoSuchOccurrence";
    case ErrorCode::not_singleton_run: return "NotSingletonRun";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::hole_position: return "HolePosition";
    case ErrorCode::sentinel_reuse: return "SentinelReuse";
    case ErrorCode::inconsistent_effects: return "InconsistentEffects";
    case ErrorCode::missing_sa_next: return "MissingSaNext";
    case ErrorCode::no_predecessor: return "NoPredecessor";
    case ErrorCode::finalized: return "Finalized";
    case ErrorCode::missing_sentinel: return "MissingSentinel";
    case ErrorCode::unterminated_text: return "UnterminatedText";
    case ErrorCode::symbol_absent: return "SymbolAbsent";
    case ErrorCode::symbol_absent_from_text: return "SymbolAbsentFromText";
    case ErrorCode::io: return "IO";
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::bad_version: return "BadVersion";
    case ErrorCode::corrupt_index: return "CorruptIndex";
    case ErrorCode::internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace rrix
