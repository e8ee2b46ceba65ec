#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrix/dynamic_rlbwt.hpp"
#include "rrix/errors.hpp"

namespace rrix {

inline constexpr std::uint64_t kUnknownSample = ~std::uint64_t{0};

/// SA samples of one run, stored end-anchored: e = n - SA, so the last suffix has e = 0.
/// Prepending never changes the e-value of an existing suffix.
struct SamplePair {
  std::uint64_t head = kUnknownSample;
  std::uint64_t tail = kUnknownSample;

  static SamplePair merge(const SamplePair& l, const SamplePair& r) noexcept { return {l.head, r.tail}; }
  static std::pair<SamplePair, SamplePair> split(const SamplePair& d) noexcept {
    return {{d.head, kUnknownSample}, {kUnknownSample, d.tail}};
  }
  friend bool operator==(const SamplePair&, const SamplePair&) = default;
};

/// Backward-search state carrying the SA value at the head of the interval.
struct ToeholdCursor {
  Interval interval;
  std::uint64_t first_end = 0;  ///< end-anchored SA value at interval.first
  std::uint64_t matched = 0;
  /// Set when the last step found no match; interval, first_end and matched keep the prior state.
  bool exhausted = false;
};

/// Dynamic RLBWT with an SA sample at the head and tail of every run.
class SampledRlbwt {
 public:
  using Rlbwt = DynamicRlbwt<SamplePair>;
  using Runs = Rlbwt::Runs;
  using RunHandle = Runs::RunHandle;
  static constexpr RunHandle npos = Runs::npos;

  struct PrependRecord {
    Rlbwt::PrependEffects effects;
    std::uint64_t new_end = 0;               ///< e-value of the new whole-text suffix
    std::optional<std::uint64_t> pred_end;   ///< suffix just before it in SA order
    std::optional<std::uint64_t> succ_end;   ///< suffix just after it
  };

  struct RunSample {
    Symbol symbol;
    std::uint64_t length;
    std::uint64_t head_sa;
    std::uint64_t tail_sa;
  };

  bool empty() const { return rlbwt_.empty(); }
  std::uint64_t size() const { return rlbwt_.size(); }
  std::uint64_t run_count() const { return rlbwt_.run_count(); }
  std::uint64_t hole() const { return rlbwt_.hole(); }
  Symbol terminal() const { return rlbwt_.terminal(); }
  const Rlbwt& rlbwt() const { return rlbwt_; }
  const Runs& runs() const { return rlbwt_.runs(); }

  std::uint64_t sa_of_end(std::uint64_t e) const { return size() - e; }
  std::uint64_t end_of_sa(std::uint64_t sa) const { return size() - sa; }

  std::uint64_t head_end(RunHandle h) const { return runs().data(h).head; }
  std::uint64_t tail_end(RunHandle h) const { return runs().data(h).tail; }

  ToeholdCursor start() const {
    if (empty()) fail(ErrorCode::empty_input, "toehold search over an empty index");
    return {rlbwt_.full(), head_end(runs().first_run()), 0, false};
  }

  ToeholdCursor step(const ToeholdCursor& cur, Symbol c) const {
    if (cur.exhausted || cur.interval.empty()) return cur;
    Interval next = rlbwt_.backward_step(cur.interval, c);
    if (next.empty()) {
      ToeholdCursor out = cur;
      out.exhausted = true;
      return out;
    }
    std::uint64_t first_end;
    const std::uint64_t j = cur.interval.first;
    if (c == terminal()) {
      first_end = 0;
    } else if (runs().symbol_at(j) == c) {
      first_end = cur.first_end + 1;
    } else {
      // The first c inside the interval starts a run.
      auto occ = runs().first_at_or_after(c, j);
      first_end = head_end(occ->run) + 1;
    }
    return {next, first_end, cur.matched + 1, false};
  }

  std::uint64_t sa_first(const ToeholdCursor& cur) const { return sa_of_end(cur.first_end); }

  /// Smallest suffix greater than c·T[SA[k]..], as an e-value.
  /// next_end is the e-value of SA[k+1] (absent when k = n).
  std::optional<std::uint64_t> successor_end(std::uint64_t k, Symbol c, std::optional<std::uint64_t> next_end) const {
    check_rank_position(k);
    if (c != terminal()) {
      if (auto occ = runs().first_at_or_after(c, k + 1)) {
        if (occ->position == k + 1) {
          if (!next_end) fail(ErrorCode::missing_sa_next, "SA[k+1] needed at k = " + std::to_string(k));
          return *next_end + 1;
        }
        return head_end(occ->run) + 1;
      }
    }
    auto above = runs().symbol_above(c);
    if (!above) return std::nullopt;
    if (*above == terminal()) return 0;
    return head_end(runs().first_run_of(*above)) + 1;
  }

  /// Largest suffix smaller than c·T[SA[k]..], as an e-value. prev_end is SA[k-1].
  std::optional<std::uint64_t> predecessor_end(std::uint64_t k, Symbol c, std::optional<std::uint64_t> prev_end) const {
    check_rank_position(k);
    if (c == terminal()) return 0;
    if (auto occ = runs().last_at_or_before(c, k - 1)) {
      if (occ->position == k - 1) {
        if (!prev_end) fail(ErrorCode::missing_sa_next, "SA[k-1] needed at k = " + std::to_string(k));
        return *prev_end + 1;
      }
      return tail_end(occ->run) + 1;
    }
    auto below = runs().symbol_below(c);
    if (!below) return std::nullopt;
    if (*below == terminal()) return 0;
    return tail_end(runs().last_run_of(*below)) + 1;
  }

  /// Text position of the smallest suffix exceeding c·T[SA[k]..].
  std::optional<std::uint64_t> track_successor(std::optional<std::uint64_t> sa_next, std::uint64_t k, Symbol c) const {
    check_rank_position(k);
    if (k < size() && !sa_next) fail(ErrorCode::missing_sa_next, "SA[k+1] required for k < n");
    std::optional<std::uint64_t> next_end;
    if (sa_next) next_end = end_of_sa(*sa_next);
    auto e = successor_end(k, c, next_end);
    if (!e) return std::nullopt;
    return sa_of_end(*e);
  }

  /// Mirror of track_successor: text position of the largest suffix below c·T[SA[k]..].
  std::optional<std::uint64_t> track_predecessor(std::optional<std::uint64_t> sa_prev, std::uint64_t k, Symbol c) const {
    check_rank_position(k);
    if (k > 1 && !sa_prev) fail(ErrorCode::missing_sa_next, "SA[k-1] required for k > 1");
    std::optional<std::uint64_t> prev_end;
    if (sa_prev) prev_end = end_of_sa(*sa_prev);
    auto e = predecessor_end(k, c, prev_end);
    if (!e) return std::nullopt;
    return sa_of_end(*e);
  }

  /// Prepends c and repairs the samples around the old and new hole.
  PrependRecord prepend(Symbol c) {
    PrependRecord rec;
    if (empty()) {
      rec.effects = rlbwt_.prepend(c, SamplePair{0, 0});
      return rec;
    }
    const std::uint64_t n = size();
    const std::uint64_t k = hole();
    const RunHandle hole_run = runs().run_at(k);
    const RunHandle before = runs().prev_run(hole_run);
    const RunHandle after = runs().next_run(hole_run);
    std::optional<std::uint64_t> prev_end, next_end;
    if (before != npos) prev_end = tail_end(before);
    if (after != npos) next_end = head_end(after);

    // Validates c before anything is computed from it.
    rlbwt_.insertion_point(c);
    rec.succ_end = successor_end(k, c, next_end);
    rec.pred_end = predecessor_end(k, c, prev_end);
    rec.new_end = n;
    rec.effects = rlbwt_.prepend(c, SamplePair{n, n});

    const auto& ins = rec.effects.inserted;
    switch (ins.kind) {
      case Runs::InsertCase::new_run:
        break;
      case Runs::InsertCase::split_run: {
        if (!rec.pred_end || !rec.succ_end)
          fail(ErrorCode::inconsistent_effects, "split without both SA neighbours");
        SamplePair left = runs().data(ins.left_fragment);
        SamplePair right = runs().data(ins.right_fragment);
        left.tail = *rec.pred_end;
        right.head = *rec.succ_end;
        rlbwt_.set_run_data(ins.left_fragment, left);
        rlbwt_.set_run_data(ins.right_fragment, right);
        break;
      }
      case Runs::InsertCase::extended_run:
        fail(ErrorCode::inconsistent_effects, "the terminal joined an existing run");
    }
    return rec;
  }

  /// Runs with SA-valued samples, in BWT order.
  std::vector<RunSample> run_samples() const {
    std::vector<RunSample> out;
    out.reserve(run_count());
    for (RunHandle h = runs().first_run(); h != npos; h = runs().next_run(h))
      out.push_back({runs().run_symbol(h), runs().run_length(h), sa_of_end(head_end(h)), sa_of_end(tail_end(h))});
    return out;
  }

  /// Replaces the state with the given runs (SA-valued samples) and hole.
  void assign(std::span<const RunSample> runs, std::uint64_t hole) {
    std::uint64_t n = 0;
    for (const auto& r : runs) n += r.length;
    std::vector<Rlbwt::RunSpec> specs;
    specs.reserve(runs.size());
    for (const auto& r : runs) {
      if (r.head_sa == 0 || r.head_sa > n || r.tail_sa == 0 || r.tail_sa > n)
        fail(ErrorCode::corrupt_index, "SA sample outside 1..n");
      specs.push_back({r.symbol, r.length, SamplePair{n - r.head_sa, n - r.tail_sa}});
    }
    rlbwt_.assign(specs, hole);
    if (sa_of_end(runs_at_hole_sample()) != 1) fail(ErrorCode::corrupt_index, "hole sample is not SA = 1");
  }

  /// Throws ErrorCode::internal unless every sample equals the given suffix array.
  void check_samples(std::span<const std::uint64_t> sa) const {
    if (sa.size() != size()) fail(ErrorCode::internal, "suffix array length mismatch");
    std::uint64_t pos = 1;
    for (RunHandle h = runs().first_run(); h != npos; h = runs().next_run(h)) {
      const std::uint64_t tail = pos + runs().run_length(h) - 1;
      if (sa_of_end(head_end(h)) != sa[pos - 1] || sa_of_end(tail_end(h)) != sa[tail - 1])
        fail(ErrorCode::internal, "SA sample mismatch at run starting " + std::to_string(pos));
      pos = tail + 1;
    }
  }

 private:
  void check_rank_position(std::uint64_t k) const {
    if (k == 0 || k > size()) fail(ErrorCode::out_of_bounds, "BWT position " + std::to_string(k));
  }

  std::uint64_t runs_at_hole_sample() const { return head_end(runs().run_at(hole())); }

  Rlbwt rlbwt_;
};

}  // namespace rrix
