#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rrix/errors.hpp"
#include "rrix/toehold.hpp"

namespace rrix {

/// Ordered set of pairs (x, y) keyed by x, with predecessor search.
class BoundarySet {
 public:
  using Pair = std::pair<std::uint64_t, std::uint64_t>;

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  void insert(std::uint64_t x, std::uint64_t y) {
    if (!pairs_.emplace(x, y).second) fail(ErrorCode::internal, "boundary key inserted twice");
  }

  void erase(std::uint64_t x) {
    if (pairs_.erase(x) != 1) fail(ErrorCode::internal, "boundary key missing on erase");
  }

  /// The pair with the largest x <= p.
  Pair pred(std::uint64_t p) const {
    auto it = pairs_.upper_bound(p);
    if (it == pairs_.begin()) fail(ErrorCode::no_predecessor, "no boundary pair at or below " + std::to_string(p));
    --it;
    return *it;
  }

  std::vector<Pair> pairs() const { return {pairs_.begin(), pairs_.end()}; }
  void clear() { pairs_.clear(); }

 private:
  std::map<std::uint64_t, std::uint64_t> pairs_;
};

/// The dynamic r-index: sampled RLBWT plus the boundary set B.
///
/// B holds (SA[k], SA[k+1]) for every run boundary k. Keys are kept in an anchored
/// coordinate, kAnchor - e with e the end-anchored SA value; this differs from SA by
/// a constant, so predecessor queries and the next-SA arithmetic carry over unchanged
/// while prepending never renumbers a stored pair.
class DynamicRIndex {
 public:
  using RunHandle = SampledRlbwt::RunHandle;
  using RunSample = SampledRlbwt::RunSample;
  static constexpr RunHandle npos = SampledRlbwt::npos;

  std::uint64_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }
  std::uint64_t run_count() const { return index_.run_count(); }
  std::uint64_t boundary_count() const { return boundaries_.size(); }
  std::uint64_t hole() const { return index_.hole(); }
  Symbol terminal() const { return index_.terminal(); }
  const SampledRlbwt& sampled() const { return index_; }
  std::vector<Symbol> bwt() const { return index_.rlbwt().bwt(); }

  /// Prepends c to the indexed text.
  void extend(Symbol c) {
    if (index_.empty()) {
      index_.prepend(c);
      return;
    }
    const auto& runs = index_.runs();
    const std::uint64_t k = index_.hole();
    const RunHandle hole_run = runs.run_at(k);
    const RunHandle before = runs.prev_run(hole_run);
    const RunHandle after = runs.next_run(hole_run);
    const std::uint64_t hole_end = index_.size() - 1;
    std::optional<std::uint64_t> before_tail, after_head;
    if (before != npos) before_tail = index_.tail_end(before);
    if (after != npos) after_head = index_.head_end(after);

    auto rec = index_.prepend(c);

    using Merge = SampledRlbwt::Runs::MergeCase;
    switch (rec.effects.replaced->kind) {
      case Merge::none:
        break;
      case Merge::left:
        erase_pair(*before_tail);
        break;
      case Merge::right:
        erase_pair(hole_end);
        break;
      case Merge::both:
        erase_pair(*before_tail);
        erase_pair(hole_end);
        break;
    }

    const auto& ins = rec.effects.inserted;
    if (ins.kind == SampledRlbwt::Runs::InsertCase::split_run) {
      insert_pair(*rec.pred_end, rec.new_end);
      insert_pair(rec.new_end, *rec.succ_end);
      return;
    }
    const RunHandle left = runs.prev_run(ins.run);
    const RunHandle right = runs.next_run(ins.run);
    if (left != npos && right != npos) erase_pair(index_.tail_end(left));
    if (left != npos) insert_pair(index_.tail_end(left), rec.new_end);
    if (right != npos) insert_pair(rec.new_end, index_.head_end(right));
  }

  /// Occurrence count of p; the empty pattern occurs n times.
  std::uint64_t count(std::span<const Symbol> p) const {
    if (empty()) return 0;
    Interval iv = index_.rlbwt().full();
    for (std::size_t i = p.size(); i-- > 0;) {
      iv = index_.rlbwt().backward_step(iv, p[i]);
      if (iv.empty()) return 0;
    }
    return iv.size();
  }

  /// All occurrence positions of p, ascending.
  std::vector<std::uint64_t> locate_all(std::span<const Symbol> p) const {
    std::vector<std::uint64_t> out;
    if (empty()) return out;
    ToeholdCursor cur = index_.start();
    for (std::size_t i = p.size(); i-- > 0;) {
      cur = index_.step(cur, p[i]);
      if (cur.exhausted) return out;
    }
    out.reserve(cur.interval.size());
    std::uint64_t e = cur.first_end;
    out.push_back(index_.sa_of_end(e));
    for (std::uint64_t k = 1; k < cur.interval.size(); ++k) {
      e = next_end(e);
      out.push_back(index_.sa_of_end(e));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// The pair (x, y) of B with the largest x <= p, in SA coordinates.
  BoundarySet::Pair pred_b(std::uint64_t p) const {
    if (p == 0 || p > size()) fail(ErrorCode::out_of_bounds, "text position " + std::to_string(p));
    auto [x, y] = boundaries_.pred(key_of_sa(p));
    return {sa_of_key(x), sa_of_key(y)};
  }

  /// SA[k+1] given SA[k]: y + (SA[k] - x) for the pair (x, y) of B with the largest x <= SA[k].
  std::uint64_t next_sa(std::uint64_t sa) const {
    if (sa == 0 || sa > size()) fail(ErrorCode::out_of_bounds, "text position " + std::to_string(sa));
    return index_.sa_of_end(next_end(index_.end_of_sa(sa)));
  }

  /// Boundary pairs in SA coordinates, sorted by x.
  std::vector<BoundarySet::Pair> boundary_pairs() const {
    std::vector<BoundarySet::Pair> out;
    out.reserve(boundaries_.size());
    for (auto [x, y] : boundaries_.pairs()) out.emplace_back(sa_of_key(x), sa_of_key(y));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// The whole suffix array, by iterating next_sa from SA[1].
  std::vector<std::uint64_t> suffix_array() const {
    std::vector<std::uint64_t> sa;
    if (empty()) return sa;
    sa.reserve(size());
    std::uint64_t e = index_.head_end(index_.runs().first_run());
    sa.push_back(index_.sa_of_end(e));
    for (std::uint64_t k = 1; k < size(); ++k) {
      e = next_end(e);
      sa.push_back(index_.sa_of_end(e));
    }
    return sa;
  }

  /// The indexed text, recovered from the suffix array and the BWT.
  std::vector<Symbol> text() const {
    std::vector<Symbol> t(size());
    if (empty()) return t;
    auto sa = suffix_array();
    auto bwt = this->bwt();
    for (std::size_t i = 0; i < sa.size(); ++i) {
      if (sa[i] > 1) t[sa[i] - 2] = bwt[i];
    }
    t.back() = terminal();
    return t;
  }

  std::vector<RunSample> run_samples() const { return index_.run_samples(); }

  /// Builds an index from a text and its suffix array without replaying prepends.
  static DynamicRIndex from_suffix_array(std::span<const Symbol> text, std::span<const std::uint64_t> sa) {
    if (text.empty()) fail(ErrorCode::empty_input, "empty text");
    if (sa.size() != text.size()) fail(ErrorCode::invalid_argument, "suffix array length mismatch");
    std::vector<RunSample> runs;
    std::uint64_t hole = 0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
      Symbol c = sa[i] > 1 ? text[sa[i] - 2] : text.back();
      if (sa[i] == 1) hole = i + 1;
      if (!runs.empty() && runs.back().symbol == c) {
        ++runs.back().length;
        runs.back().tail_sa = sa[i];
      } else {
        runs.push_back({c, 1, sa[i], sa[i]});
      }
    }
    return from_runs(runs, hole);
  }

  /// Rebuilds an index from its run list; B is derived from the samples.
  static DynamicRIndex from_runs(std::span<const RunSample> runs, std::uint64_t hole) {
    DynamicRIndex idx;
    idx.index_.assign(runs, hole);
    for (std::size_t i = 0; i + 1 < runs.size(); ++i)
      idx.insert_pair(idx.index_.end_of_sa(runs[i].tail_sa), idx.index_.end_of_sa(runs[i + 1].head_sa));
    return idx;
  }

  /// Throws ErrorCode::internal unless B matches the run samples exactly.
  void check_boundaries() const {
    std::vector<BoundarySet::Pair> derived;
    auto runs = run_samples();
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) derived.emplace_back(runs[i].tail_sa, runs[i + 1].head_sa);
    std::sort(derived.begin(), derived.end());
    if (derived != boundary_pairs()) fail(ErrorCode::internal, "boundary set out of sync with run samples");
  }

  /// Recomputes the suffix array by an LF walk from the terminal's row and compares every run sample.
  /// Throws CorruptIndex if the BWT is not a single cycle or a sample is wrong.
  void verify_samples() const {
    if (empty()) return;
    const auto& bwt = index_.rlbwt();
    const std::uint64_t n = size();
    std::vector<std::uint64_t> sa(n, 0);
    std::uint64_t row = bwt.count_less(terminal()) + 1;
    for (std::uint64_t s = n; s >= 1; --s) {
      if (row == 0 || row > n || sa[row - 1] != 0) fail(ErrorCode::corrupt_index, "LF walk revisits a row");
      sa[row - 1] = s;
      if (row == hole()) {
        if (s != 1) fail(ErrorCode::corrupt_index, "LF walk reaches the hole early");
        break;
      }
      if (s == 1) fail(ErrorCode::corrupt_index, "LF walk misses the hole");
      row = bwt.lf(row);
    }
    try {
      index_.check_samples(sa);
    } catch (const Error& e) {
      fail(ErrorCode::corrupt_index, e.what());
    }
  }

 private:
  // Anchor far above any reachable e-value.
  static constexpr std::uint64_t kAnchor = std::uint64_t{1} << 62;

  static std::uint64_t key_of_end(std::uint64_t e) { return kAnchor - e; }
  std::uint64_t key_of_sa(std::uint64_t sa) const { return key_of_end(index_.end_of_sa(sa)); }
  std::uint64_t sa_of_key(std::uint64_t key) const { return index_.sa_of_end(kAnchor - key); }

  void insert_pair(std::uint64_t x_end, std::uint64_t y_end) { boundaries_.insert(key_of_end(x_end), key_of_end(y_end)); }
  void erase_pair(std::uint64_t x_end) { boundaries_.erase(key_of_end(x_end)); }

  std::uint64_t next_end(std::uint64_t e) const {
    const std::uint64_t key = key_of_end(e);
    auto [x, y] = boundaries_.pred(key);
    return kAnchor - (y + key - x);
  }

  SampledRlbwt index_;
  BoundarySet boundaries_;
};

}  // namespace rrix
