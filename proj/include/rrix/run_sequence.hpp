#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rrix/detail/avl_sequence.hpp"
#include "rrix/errors.hpp"
#include "rrix/symbols.hpp"

namespace rrix {

/// Per-run payload that carries nothing.
struct NoRunData {
  static NoRunData merge(const NoRunData&, const NoRunData&) noexcept { return {}; }
  static std::pair<NoRunData, NoRunData> split(const NoRunData&) noexcept { return {}; }
  friend bool operator==(const NoRunData&, const NoRunData&) = default;
};

/// Dynamic sequence of maximal equal-symbol runs.
///
/// Three trees cooperate:
///  - the run tree holds runs in sequence order, summarizing total length and run count;
///  - one tree per symbol holds that symbol's runs in the same order, summarizing length;
///  - a symbol directory ordered by code summarizes per-symbol totals (for C(c)).
/// Per-symbol trees are ordered by order-maintenance labels stored on the runs, so a
/// rank query is one descent of the run tree plus one descent of a symbol tree.
///
/// Data is an optional per-run payload with `merge(left, right)` and `split(d)`.
template <class Data = NoRunData>
class RunSequence {
 public:
  using RunHandle = std::uint32_t;
  static constexpr RunHandle npos = ~RunHandle{0};

  enum class InsertCase { new_run, extended_run, split_run };
  struct InsertEffect {
    InsertCase kind;
    RunHandle run;  ///< the run that now holds the inserted symbol
    RunHandle left_fragment = npos;
    RunHandle right_fragment = npos;
  };

  enum class MergeCase { none, left, right, both };
  struct ReplaceEffect {
    MergeCase kind;
    RunHandle run;  ///< the run that now holds the replaced position
  };

  struct RunBounds {
    std::uint64_t run_index;  ///< 1-based
    std::uint64_t head;
    std::uint64_t tail;
    RunHandle handle;
  };

  struct Occurrence {
    std::uint64_t position;
    RunHandle run;
  };

  std::uint64_t size() const { return runs_.total().length; }
  std::uint64_t run_count() const { return runs_.size(); }
  bool empty() const { return runs_.empty(); }
  int height() const { return runs_.height(); }

  Symbol symbol_at(std::uint64_t i) const {
    check_position(i);
    return runs_[locate(i).first].symbol;
  }

  /// Occurrences of c in positions 1..i.
  std::uint64_t rank(Symbol c, std::uint64_t i) const {
    if (i > size()) fail(ErrorCode::out_of_bounds, "rank position " + std::to_string(i) + " beyond " + std::to_string(size()));
    if (i == 0) return 0;
    const SymTree* tree = tree_of(c);
    if (tree == nullptr) return 0;
    auto [x, offset] = locate(i);
    const RunNode& run = runs_[x];
    if (run.symbol == c) return tree->prefix(run.sym_node).length + offset;
    return length_before_label(*tree, run.label);
  }

  /// Position of the k-th occurrence of c (1-based k).
  std::uint64_t select(Symbol c, std::uint64_t k) const { return select_occurrence(c, k).position; }

  Occurrence select_occurrence(Symbol c, std::uint64_t k) const {
    const SymTree* tree = tree_of(c);
    if (k == 0 || tree == nullptr || k > tree->total().length)
      fail(ErrorCode::no_such_occurrence, "occurrence " + std::to_string(k) + " of " + symbol_name(c));
    auto node = tree->root();
    for (;;) {
      std::uint64_t left = tree->subtree(tree->left(node)).length;
      std::uint64_t here = (*tree)[node].length;
      if (k <= left) {
        node = tree->left(node);
      } else if (k <= left + here) {
        RunHandle run = (*tree)[node].run;
        return {run_head(run) + (k - left) - 1, run};
      } else {
        k -= left + here;
        node = tree->right(node);
      }
    }
  }

  /// First occurrence of c at a position >= i, if any (i may be size()+1).
  std::optional<Occurrence> first_at_or_after(Symbol c, std::uint64_t i) const {
    std::uint64_t before = i <= 1 ? 0 : rank(c, std::min(i - 1, size()));
    if (before == count(c)) return std::nullopt;
    return select_occurrence(c, before + 1);
  }

  /// Last occurrence of c at a position <= i, if any (i may be 0).
  std::optional<Occurrence> last_at_or_before(Symbol c, std::uint64_t i) const {
    std::uint64_t upto = rank(c, std::min(i, size()));
    if (upto == 0) return std::nullopt;
    return select_occurrence(c, upto);
  }

  RunBounds run_bounds(std::uint64_t i) const {
    check_position(i);
    auto [x, offset] = locate(i);
    std::uint64_t head = i - offset + 1;
    return {runs_.prefix(x).runs + 1, head, head + runs_[x].length - 1, x};
  }

  /// Inserts c before position i (1 <= i <= size()+1); `fresh` is the payload of a newly created run.
  InsertEffect insert(std::uint64_t i, Symbol c, Data fresh = {}) {
    if (i == 0 || i > size() + 1)
      fail(ErrorCode::out_of_bounds, "insert position " + std::to_string(i) + " outside 1.." + std::to_string(size() + 1));
    if (empty()) return {InsertCase::new_run, new_run_before(npos, c, 1, std::move(fresh))};

    RunHandle x = npos;
    std::uint64_t offset = 1;
    if (i <= size()) std::tie(x, offset) = locate(i);

    if (offset == 1) {
      RunHandle p = x == npos ? runs_.last() : runs_.prev(x);
      if (p != npos && runs_[p].symbol == c) {
        grow(p, 1);
        return {InsertCase::extended_run, p};
      }
      if (x != npos && runs_[x].symbol == c) {
        grow(x, 1);
        return {InsertCase::extended_run, x};
      }
      return {InsertCase::new_run, new_run_before(x, c, 1, std::move(fresh))};
    }
    if (runs_[x].symbol == c) {
      grow(x, 1);
      return {InsertCase::extended_run, x};
    }

    auto [left_data, right_data] = Data::split(runs_[x].data);
    const std::uint64_t right_length = runs_[x].length - offset + 1;
    const Symbol split_symbol = runs_[x].symbol;
    runs_.modify(x, [&](RunNode& r) {
      r.length = offset - 1;
      r.data = std::move(left_data);
    });
    set_sym_length(split_symbol, x);
    RunHandle after = runs_.next(x);
    RunHandle middle = new_run_before(after, c, 1, std::move(fresh));
    RunHandle right = new_run_before(after, split_symbol, right_length, std::move(right_data));
    return {InsertCase::split_run, middle, x, right};
  }

  /// Replaces the symbol of a length-1 run at position i, merging with equal neighbours.
  ReplaceEffect replace(std::uint64_t i, Symbol c) {
    check_position(i);
    RunHandle x = locate(i).first;
    if (runs_[x].length != 1) fail(ErrorCode::not_singleton_run, "position " + std::to_string(i) + " lies in a run longer than 1");
    if (runs_[x].symbol == c) fail(ErrorCode::invalid_argument, "replacement symbol equals the current one");

    RunHandle p = runs_.prev(x);
    RunHandle nx = runs_.next(x);
    const bool merge_left = p != npos && runs_[p].symbol == c;
    const bool merge_right = nx != npos && runs_[nx].symbol == c;

    if (merge_left && merge_right) {
      Data merged = Data::merge(Data::merge(runs_[p].data, runs_[x].data), runs_[nx].data);
      std::uint64_t length = runs_[p].length + 1 + runs_[nx].length;
      remove_run(nx);
      remove_run(x);
      runs_.modify(p, [&](RunNode& r) {
        r.length = length;
        r.data = std::move(merged);
      });
      set_sym_length(c, p);
      return {MergeCase::both, p};
    }
    if (merge_left) {
      Data merged = Data::merge(runs_[p].data, runs_[x].data);
      remove_run(x);
      runs_.modify(p, [&](RunNode& r) {
        r.length += 1;
        r.data = std::move(merged);
      });
      set_sym_length(c, p);
      return {MergeCase::left, p};
    }
    if (merge_right) {
      Data merged = Data::merge(runs_[x].data, runs_[nx].data);
      remove_run(x);
      runs_.modify(nx, [&](RunNode& r) {
        r.length += 1;
        r.data = std::move(merged);
      });
      set_sym_length(c, nx);
      return {MergeCase::right, nx};
    }
    sym_remove(runs_[x].symbol, x);
    runs_.modify(x, [&](RunNode& r) { r.symbol = c; });
    sym_add(c, x);
    return {MergeCase::none, x};
  }

  // Run-level navigation.
  RunHandle first_run() const { return runs_.first(); }
  RunHandle last_run() const { return runs_.last(); }
  RunHandle next_run(RunHandle h) const { return runs_.next(h); }
  RunHandle prev_run(RunHandle h) const { return runs_.prev(h); }
  Symbol run_symbol(RunHandle h) const { return runs_[h].symbol; }
  std::uint64_t run_length(RunHandle h) const { return runs_[h].length; }
  std::uint64_t run_head(RunHandle h) const { return runs_.prefix(h).length + 1; }
  std::uint64_t run_tail(RunHandle h) const { return runs_.prefix(h).length + runs_[h].length; }
  const Data& data(RunHandle h) const { return runs_[h].data; }
  void set_data(RunHandle h, Data d) {
    runs_.modify(h, [&](RunNode& r) { r.data = std::move(d); });
  }
  RunHandle run_at(std::uint64_t i) const {
    check_position(i);
    return locate(i).first;
  }

  /// Appends a whole run at the end (bulk loading); merges with an equal last run.
  RunHandle append_run(Symbol c, std::uint64_t length, Data d = {}) {
    if (length == 0) fail(ErrorCode::invalid_argument, "zero-length run");
    RunHandle last = runs_.last();
    if (last != npos && runs_[last].symbol == c) {
      runs_.modify(last, [&](RunNode& r) {
        r.length += length;
        r.data = Data::merge(r.data, d);
      });
      set_sym_length(c, last);
      return last;
    }
    return new_run_before(npos, c, length, std::move(d));
  }

  // Per-symbol statistics.
  std::uint64_t count(Symbol c) const {
    const SymTree* tree = tree_of(c);
    return tree == nullptr ? 0 : tree->total().length;
  }

  /// C(c): occurrences of symbols strictly smaller than c.
  std::uint64_t count_less(Symbol c) const {
    std::uint64_t acc = 0;
    auto node = dir_.root();
    while (node != Dir::npos) {
      if (dir_[node].symbol < c) {
        acc += dir_.subtree(dir_.left(node)).count + dir_[node].count;
        node = dir_.right(node);
      } else {
        node = dir_.left(node);
      }
    }
    return acc;
  }

  /// Smallest present symbol strictly greater than c.
  std::optional<Symbol> symbol_above(Symbol c) const {
    std::optional<Symbol> best;
    for (auto node = dir_.root(); node != Dir::npos;) {
      if (dir_[node].symbol > c) {
        best = dir_[node].symbol;
        node = dir_.left(node);
      } else {
        node = dir_.right(node);
      }
    }
    return best;
  }

  /// Largest present symbol strictly smaller than c.
  std::optional<Symbol> symbol_below(Symbol c) const {
    std::optional<Symbol> best;
    for (auto node = dir_.root(); node != Dir::npos;) {
      if (dir_[node].symbol < c) {
        best = dir_[node].symbol;
        node = dir_.right(node);
      } else {
        node = dir_.left(node);
      }
    }
    return best;
  }

  std::vector<Symbol> present_symbols() const {
    std::vector<Symbol> out;
    for (auto h = dir_.first(); h != Dir::npos; h = dir_.next(h)) out.push_back(dir_[h].symbol);
    return out;
  }

  RunHandle first_run_of(Symbol c) const {
    const SymTree* tree = tree_of(c);
    return tree == nullptr ? npos : (*tree)[tree->first()].run;
  }

  RunHandle last_run_of(Symbol c) const {
    const SymTree* tree = tree_of(c);
    return tree == nullptr ? npos : (*tree)[tree->last()].run;
  }

  std::vector<Symbol> materialize() const {
    std::vector<Symbol> out;
    out.reserve(size());
    for (auto h = runs_.first(); h != npos; h = runs_.next(h)) out.insert(out.end(), runs_[h].length, runs_[h].symbol);
    return out;
  }

  /// Full consistency check of all three trees; throws ErrorCode::internal on violation.
  void check_invariants() const {
    std::uint64_t total = 0;
    std::uint64_t runs = 0;
    std::uint64_t prev_label = 0;
    Symbol prev_symbol = 0;
    std::vector<std::pair<Symbol, std::uint64_t>> seen;
    for (auto h = runs_.first(); h != npos; h = runs_.next(h)) {
      const RunNode& r = runs_[h];
      if (r.length == 0) broken("zero-length run");
      if (runs > 0 && r.symbol == prev_symbol) broken("adjacent runs share a symbol");
      if (runs > 0 && r.label <= prev_label) broken("labels out of order");
      const SymTree* tree = tree_of(r.symbol);
      if (tree == nullptr || (*tree)[r.sym_node].run != h || (*tree)[r.sym_node].length != r.length)
        broken("symbol tree out of sync");
      prev_label = r.label;
      prev_symbol = r.symbol;
      total += r.length;
      ++runs;
    }
    if (total != size() || runs != run_count()) broken("summary mismatch");
    std::uint64_t dir_total = 0;
    for (auto d = dir_.first(); d != Dir::npos; d = dir_.next(d)) {
      const SymTree& tree = trees_[dir_[d].tree];
      if (tree.total().length != dir_[d].count || dir_[d].count == 0) broken("directory count mismatch");
      std::uint64_t last = 0;
      bool any = false;
      for (auto s = tree.first(); s != SymTree::npos; s = tree.next(s)) {
        std::uint64_t label = runs_[tree[s].run].label;
        if (any && label <= last) broken("symbol tree order");
        last = label;
        any = true;
      }
      dir_total += dir_[d].count;
    }
    if (dir_total != total) broken("directory total mismatch");
  }

 private:
  struct RunNode {
    Symbol symbol = 0;
    std::uint64_t length = 0;
    std::uint64_t label = 0;
    std::uint32_t sym_node = ~std::uint32_t{0};
    Data data{};
  };
  struct RunSummary {
    std::uint64_t length = 0;
    std::uint64_t runs = 0;
    friend RunSummary operator+(const RunSummary& a, const RunSummary& b) {
      return {a.length + b.length, a.runs + b.runs};
    }
  };
  struct RunTraits {
    using value_type = RunNode;
    using summary_type = RunSummary;
    static RunSummary summarize(const RunNode& r) { return {r.length, 1}; }
  };

  struct SymRun {
    RunHandle run = npos;
    std::uint64_t length = 0;
  };
  struct LengthSummary {
    std::uint64_t length = 0;
    friend LengthSummary operator+(const LengthSummary& a, const LengthSummary& b) { return {a.length + b.length}; }
  };
  struct SymTraits {
    using value_type = SymRun;
    using summary_type = LengthSummary;
    static LengthSummary summarize(const SymRun& s) { return {s.length}; }
  };

  struct DirEntry {
    Symbol symbol = 0;
    std::uint64_t count = 0;
    std::uint32_t tree = 0;
  };
  struct CountSummary {
    std::uint64_t count = 0;
    friend CountSummary operator+(const CountSummary& a, const CountSummary& b) { return {a.count + b.count}; }
  };
  struct DirTraits {
    using value_type = DirEntry;
    using summary_type = CountSummary;
    static CountSummary summarize(const DirEntry& d) { return {d.count}; }
  };

  using RunTree = detail::AvlSequence<RunTraits>;
  using SymTree = detail::AvlSequence<SymTraits>;
  using Dir = detail::AvlSequence<DirTraits>;

  // Labels live in [1, kLabelSpace); 0 and kLabelSpace are virtual sentinels.
  static constexpr int kLabelBits = 62;
  static constexpr std::uint64_t kLabelSpace = std::uint64_t{1} << kLabelBits;
  // Relabel density parameter: a window of 2^i labels may hold at most (2/T)^i runs.
  static constexpr double kDensityBase = 1.4;

  [[noreturn]] static void broken(const char* what) { fail(ErrorCode::internal, std::string("run sequence: ") + what); }

  void check_position(std::uint64_t i) const {
    if (i == 0 || i > size())
      fail(ErrorCode::out_of_bounds, "position " + std::to_string(i) + " outside 1.." + std::to_string(size()));
  }

  /// Run containing position i and the 1-based offset of i inside it.
  std::pair<RunHandle, std::uint64_t> locate(std::uint64_t i) const {
    auto node = runs_.root();
    for (;;) {
      std::uint64_t left = runs_.subtree(runs_.left(node)).length;
      std::uint64_t here = runs_[node].length;
      if (i <= left) {
        node = runs_.left(node);
      } else if (i <= left + here) {
        return {node, i - left};
      } else {
        i -= left + here;
        node = runs_.right(node);
      }
    }
  }

  std::uint64_t length_before_label(const SymTree& tree, std::uint64_t label) const {
    std::uint64_t acc = 0;
    for (auto node = tree.root(); node != SymTree::npos;) {
      if (runs_[tree[node].run].label < label) {
        acc += tree.subtree(tree.left(node)).length + tree[node].length;
        node = tree.right(node);
      } else {
        node = tree.left(node);
      }
    }
    return acc;
  }

  typename Dir::handle find_dir(Symbol c) const {
    for (auto node = dir_.root(); node != Dir::npos;) {
      Symbol s = dir_[node].symbol;
      if (s == c) return node;
      node = c < s ? dir_.left(node) : dir_.right(node);
    }
    return Dir::npos;
  }

  const SymTree* tree_of(Symbol c) const {
    auto d = find_dir(c);
    return d == Dir::npos ? nullptr : &trees_[dir_[d].tree];
  }

  typename Dir::handle find_or_create_dir(Symbol c) {
    typename Dir::handle after = Dir::npos;  // first entry with symbol > c
    for (auto node = dir_.root(); node != Dir::npos;) {
      Symbol s = dir_[node].symbol;
      if (s == c) return node;
      if (c < s) {
        after = node;
        node = dir_.left(node);
      } else {
        node = dir_.right(node);
      }
    }
    std::uint32_t tree;
    if (!free_trees_.empty()) {
      tree = free_trees_.back();
      free_trees_.pop_back();
    } else {
      tree = static_cast<std::uint32_t>(trees_.size());
      trees_.emplace_back();
    }
    return dir_.insert_before(after, DirEntry{c, 0, tree});
  }

  void sym_add(Symbol c, RunHandle h) {
    auto d = find_or_create_dir(c);
    SymTree& tree = trees_[dir_[d].tree];
    const std::uint64_t label = runs_[h].label;
    auto after = SymTree::npos;  // first node with a larger label
    for (auto node = tree.root(); node != SymTree::npos;) {
      if (runs_[tree[node].run].label > label) {
        after = node;
        node = tree.left(node);
      } else {
        node = tree.right(node);
      }
    }
    const std::uint64_t length = runs_[h].length;
    auto s = tree.insert_before(after, SymRun{h, length});
    runs_.modify(h, [&](RunNode& r) { r.sym_node = s; });
    dir_.modify(d, [&](DirEntry& e) { e.count += length; });
  }

  void sym_remove(Symbol c, RunHandle h) {
    auto d = find_dir(c);
    SymTree& tree = trees_[dir_[d].tree];
    const std::uint64_t length = tree[runs_[h].sym_node].length;
    tree.erase(runs_[h].sym_node);
    if (tree.empty()) {
      tree.clear();
      free_trees_.push_back(dir_[d].tree);
      dir_.erase(d);
    } else {
      dir_.modify(d, [&](DirEntry& e) { e.count -= length; });
    }
  }

  /// Pushes the run's current length into its symbol tree and the directory.
  void set_sym_length(Symbol c, RunHandle h) {
    auto d = find_dir(c);
    SymTree& tree = trees_[dir_[d].tree];
    auto s = runs_[h].sym_node;
    const std::uint64_t old = tree[s].length;
    const std::uint64_t now = runs_[h].length;
    tree.modify(s, [&](SymRun& v) { v.length = now; });
    dir_.modify(d, [&](DirEntry& e) { e.count = e.count - old + now; });
  }

  void grow(RunHandle h, std::uint64_t delta) {
    runs_.modify(h, [&](RunNode& r) { r.length += delta; });
    set_sym_length(runs_[h].symbol, h);
  }

  RunHandle new_run_before(RunHandle pos, Symbol c, std::uint64_t length, Data d) {
    RunHandle h = runs_.insert_before(pos, RunNode{c, length, 0, ~std::uint32_t{0}, std::move(d)});
    assign_label(h);
    sym_add(c, h);
    return h;
  }

  void remove_run(RunHandle h) {
    sym_remove(runs_[h].symbol, h);
    runs_.erase(h);
  }

  void set_label(RunHandle h, std::uint64_t label) {
    runs_.unsummarized(h).label = label;
  }

  void assign_label(RunHandle h) {
    RunHandle p = runs_.prev(h);
    RunHandle nx = runs_.next(h);
    std::uint64_t lo = p == npos ? 0 : runs_[p].label;
    std::uint64_t hi = nx == npos ? kLabelSpace : runs_[nx].label;
    if (hi - lo >= 2) {
      set_label(h, lo + (hi - lo) / 2);
      return;
    }
    relabel_around(h, lo);
  }

  /// Spreads labels evenly over the smallest aligned window around `anchor`
  /// that is sparse enough; h is the unlabeled newcomer sitting in that window.
  void relabel_around(RunHandle h, std::uint64_t anchor) {
    for (int bits = 1; bits <= kLabelBits; ++bits) {
      const std::uint64_t width = std::uint64_t{1} << bits;
      const std::uint64_t base = anchor & ~(width - 1);
      const double capacity = std::pow(2.0 / kDensityBase, bits);
      std::uint64_t count = 1;
      RunHandle lo_end = h;
      for (RunHandle x = runs_.prev(h); x != npos && runs_[x].label >= base; x = runs_.prev(x)) {
        lo_end = x;
        if (++count > capacity) break;
      }
      if (count > capacity) continue;
      for (RunHandle x = runs_.next(h); x != npos && runs_[x].label < base + width; x = runs_.next(x)) {
        if (++count > capacity) break;
      }
      if (count > capacity || width / count < 2) continue;
      const std::uint64_t gap = width / count;
      std::uint64_t label = base + gap / 2;
      if (label == 0) label = 1;
      RunHandle x = lo_end;
      for (std::uint64_t k = 0; k < count; ++k, x = runs_.next(x)) {
        set_label(x, label);
        label += gap;
      }
      return;
    }
    broken("label space exhausted");
  }

  RunTree runs_;
  std::vector<SymTree> trees_;
  std::vector<std::uint32_t> free_trees_;
  Dir dir_;
};

}  // namespace rrix
