#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrix/errors.hpp"
#include "rrix/run_sequence.hpp"
#include "rrix/symbols.hpp"

namespace rrix {

/// Closed BWT interval [first..last]; first > last is the empty interval.
struct Interval {
  std::uint64_t first = 1;
  std::uint64_t last = 0;

  bool empty() const noexcept { return first > last; }
  std::uint64_t size() const noexcept { return empty() ? 0 : last - first + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// RLBWT of a text that grows by prepending.
///
/// The text always ends in a unique terminal symbol (the first symbol ever
/// prepended). The BWT position whose suffix is the whole text holds the terminal;
/// that position is the hole. Prepending c writes c into the hole and re-inserts
/// the terminal at C(c) + rank_c(hole) + 1.
template <class Data = NoRunData>
class DynamicRlbwt {
 public:
  using Runs = RunSequence<Data>;
  using RunHandle = typename Runs::RunHandle;

  struct PrependEffects {
    std::uint64_t old_hole = 0;  ///< 0 when the text was empty
    std::uint64_t new_hole = 0;
    std::optional<typename Runs::ReplaceEffect> replaced;
    typename Runs::InsertEffect inserted;
  };

  struct RunSpec {
    Symbol symbol;
    std::uint64_t length;
    Data data{};
  };

  bool empty() const { return runs_.empty(); }
  std::uint64_t size() const { return runs_.size(); }
  std::uint64_t run_count() const { return runs_.run_count(); }
  std::uint64_t hole() const { return hole_; }
  Symbol terminal() const { return terminal_; }
  const Runs& runs() const { return runs_; }

  Symbol symbol_at(std::uint64_t i) const { return runs_.symbol_at(i); }
  std::uint64_t rank(Symbol c, std::uint64_t i) const { return runs_.rank(c, i); }
  /// C(c): number of text symbols smaller than c.
  std::uint64_t count_less(Symbol c) const { return runs_.count_less(c); }

  std::uint64_t lf(std::uint64_t i) const {
    if (i == 0 || i > size()) fail(ErrorCode::out_of_bounds, "LF position " + std::to_string(i));
    if (i == hole_) fail(ErrorCode::hole_position, "LF of the hole is undefined");
    Symbol c = runs_.symbol_at(i);
    return runs_.count_less(c) + runs_.rank(c, i);
  }

  /// Where the terminal will land if c is prepended now.
  std::uint64_t insertion_point(Symbol c) const {
    check_prependable(c);
    return runs_.count_less(c) + runs_.rank(c, hole_) + 1;
  }

  /// Prepends c. `hole_data` becomes the payload of the terminal's new run.
  PrependEffects prepend(Symbol c, Data hole_data = {}) {
    if (empty()) {
      terminal_ = c;
      hole_ = 1;
      auto inserted = runs_.insert(1, c, std::move(hole_data));
      return {0, 1, std::nullopt, inserted};
    }
    const std::uint64_t target = insertion_point(c);
    PrependEffects effects;
    effects.old_hole = hole_;
    effects.replaced = runs_.replace(hole_, c);
    effects.inserted = runs_.insert(target, terminal_, std::move(hole_data));
    effects.new_hole = target;
    hole_ = target;
    return effects;
  }

  Interval full() const { return {1, size()}; }

  /// Interval of cP given the interval of P. The terminal only ever prefixes the
  /// one-symbol suffix, so stepping with it succeeds only from the full interval.
  Interval backward_step(Interval interval, Symbol c) const {
    if (interval.empty() || interval.first == 0 || interval.last > size())
      fail(ErrorCode::out_of_bounds, "backward step from an invalid interval");
    const std::uint64_t base = runs_.count_less(c);
    if (c == terminal_) {
      if (interval == full()) return {base + 1, base + 1};
      return {};
    }
    return {base + runs_.rank(c, interval.first - 1) + 1, base + runs_.rank(c, interval.last)};
  }

  std::vector<Symbol> bwt() const { return runs_.materialize(); }

  /// Replaces the whole state (bulk loading). The hole must sit in a length-1 run.
  void assign(std::span<const RunSpec> runs, std::uint64_t hole) {
    Runs fresh;
    for (const auto& r : runs) fresh.append_run(r.symbol, r.length, r.data);
    if (fresh.run_count() != runs.size()) fail(ErrorCode::corrupt_index, "adjacent runs share a symbol");
    if (hole == 0 || hole > fresh.size()) fail(ErrorCode::corrupt_index, "hole outside the BWT");
    auto bounds = fresh.run_bounds(hole);
    if (bounds.head != bounds.tail) fail(ErrorCode::corrupt_index, "hole is not a singleton run");
    Symbol terminal = fresh.run_symbol(bounds.handle);
    if (fresh.count(terminal) != 1) fail(ErrorCode::corrupt_index, "terminal symbol is not unique");
    runs_ = std::move(fresh);
    hole_ = hole;
    terminal_ = terminal;
  }

  void set_run_data(RunHandle h, Data d) { runs_.set_data(h, std::move(d)); }

 private:
  void check_prependable(Symbol c) const {
    if (c == terminal_ || (!is_regular(c) && runs_.count(c) > 0))
      fail(ErrorCode::sentinel_reuse, symbol_name(c) + " already occurs in the text");
  }

  Runs runs_;
  std::uint64_t hole_ = 0;
  Symbol terminal_ = kEndMarker;
};

}  // namespace rrix
