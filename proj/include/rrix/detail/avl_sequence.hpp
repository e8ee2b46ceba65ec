#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace rrix::detail {

/// Node visits across all trees on this thread. Used as the work measure for complexity checks.
inline thread_local std::uint64_t node_visits = 0;

/// Position-ordered AVL tree with parent links and a per-subtree summary.
///
/// Nodes live in a pool and are addressed by stable 32-bit handles: insertion,
/// erasure and rotations never move a value to another handle, so handles can be
/// cross-referenced between trees. Ordering is purely positional; callers that
/// want a keyed order find the insertion point by descending the tree themselves.
///
/// Traits must provide value_type, summary_type (default-constructible identity,
/// operator+ associative) and `static summary_type summarize(const value_type&)`.
template <class Traits>
class AvlSequence {
 public:
  using value_type = typename Traits::value_type;
  using summary_type = typename Traits::summary_type;
  using handle = std::uint32_t;
  static constexpr handle npos = ~handle{0};

  bool empty() const noexcept { return root_ == npos; }
  std::size_t size() const noexcept { return size_; }
  handle root() const noexcept { return root_; }

  handle left(handle h) const noexcept { ++node_visits; return nodes_[h].left; }
  handle right(handle h) const noexcept { ++node_visits; return nodes_[h].right; }
  handle parent(handle h) const noexcept { ++node_visits; return nodes_[h].parent; }

  const value_type& operator[](handle h) const noexcept { return nodes_[h].value; }

  /// Direct access for fields that do not feed the summary; no refresh happens.
  value_type& unsummarized(handle h) noexcept { return nodes_[h].value; }

  /// Summary of the subtree rooted at h (identity for npos).
  summary_type subtree(handle h) const { return h == npos ? summary_type{} : nodes_[h].sum; }
  summary_type total() const { return subtree(root_); }

  /// Mutates a value in place and refreshes the summaries on its root path.
  template <class F>
  void modify(handle h, F&& f) {
    f(nodes_[h].value);
    for (handle x = h; x != npos; x = parent(x)) update(x);
  }

  handle first() const noexcept {
    if (root_ == npos) return npos;
    handle h = root_;
    while (nodes_[h].left != npos) h = left(h);
    return h;
  }

  handle last() const noexcept {
    if (root_ == npos) return npos;
    handle h = root_;
    while (nodes_[h].right != npos) h = right(h);
    return h;
  }

  handle next(handle h) const noexcept {
    if (nodes_[h].right != npos) {
      h = right(h);
      while (nodes_[h].left != npos) h = left(h);
      return h;
    }
    handle p = parent(h);
    while (p != npos && nodes_[p].right == h) {
      h = p;
      p = parent(p);
    }
    return p;
  }

  handle prev(handle h) const noexcept {
    if (nodes_[h].left != npos) {
      h = left(h);
      while (nodes_[h].right != npos) h = right(h);
      return h;
    }
    handle p = parent(h);
    while (p != npos && nodes_[p].left == h) {
      h = p;
      p = parent(p);
    }
    return p;
  }

  /// Sum over every node strictly before h in sequence order.
  summary_type prefix(handle h) const {
    summary_type acc = subtree(nodes_[h].left);
    for (handle p = parent(h); p != npos; h = p, p = parent(p)) {
      if (nodes_[p].right == h) acc = subtree(nodes_[p].left) + Traits::summarize(nodes_[p].value) + acc;
    }
    return acc;
  }

  /// Inserts v immediately before `pos`; pos == npos appends at the end.
  handle insert_before(handle pos, value_type v) {
    handle h = allocate(std::move(v));
    ++size_;
    if (root_ == npos) {
      root_ = h;
      return h;
    }
    handle p;
    if (pos == npos) {
      p = last();
      nodes_[p].right = h;
    } else if (nodes_[pos].left == npos) {
      p = pos;
      nodes_[p].left = h;
    } else {
      p = left(pos);
      while (nodes_[p].right != npos) p = right(p);
      nodes_[p].right = h;
    }
    nodes_[h].parent = p;
    rebalance_from(p);
    return h;
  }

  handle insert_after(handle pos, value_type v) {
    if (pos == npos) return insert_before(first(), std::move(v));
    return insert_before(next(pos), std::move(v));
  }

  void erase(handle z) {
    Node& zn = nodes_[z];
    handle fix;
    if (zn.left == npos || zn.right == npos) {
      handle child = zn.left != npos ? zn.left : zn.right;
      fix = zn.parent;
      replace_child(zn.parent, z, child);
      if (child != npos) nodes_[child].parent = zn.parent;
    } else {
      // Splice the successor y into z's place, keeping every handle bound to its value.
      handle y = right(z);
      while (nodes_[y].left != npos) y = left(y);
      Node& yn = nodes_[y];
      if (yn.parent == z) {
        fix = y;
      } else {
        fix = yn.parent;
        nodes_[yn.parent].left = yn.right;
        if (yn.right != npos) nodes_[yn.right].parent = yn.parent;
        yn.right = zn.right;
        nodes_[zn.right].parent = y;
      }
      yn.left = zn.left;
      nodes_[zn.left].parent = y;
      yn.parent = zn.parent;
      replace_child(zn.parent, z, y);
    }
    release(z);
    --size_;
    rebalance_from(fix);
  }

  int height() const noexcept { return height_of(root_); }

  void clear() {
    nodes_.clear();
    free_.clear();
    root_ = npos;
    size_ = 0;
  }

 private:
  struct Node {
    value_type value;
    summary_type sum{};
    handle left = npos;
    handle right = npos;
    handle parent = npos;
    int height = 1;
  };

  int height_of(handle h) const noexcept { return h == npos ? 0 : nodes_[h].height; }

  void update(handle h) {
    Node& n = nodes_[h];
    n.height = 1 + std::max(height_of(n.left), height_of(n.right));
    n.sum = subtree(n.left) + Traits::summarize(n.value) + subtree(n.right);
  }

  void replace_child(handle p, handle old_child, handle new_child) {
    if (p == npos) {
      root_ = new_child;
    } else if (nodes_[p].left == old_child) {
      nodes_[p].left = new_child;
    } else {
      nodes_[p].right = new_child;
    }
  }

  handle rotate_left(handle x) {
    handle y = nodes_[x].right;
    nodes_[x].right = nodes_[y].left;
    if (nodes_[y].left != npos) nodes_[nodes_[y].left].parent = x;
    nodes_[y].parent = nodes_[x].parent;
    replace_child(nodes_[x].parent, x, y);
    nodes_[y].left = x;
    nodes_[x].parent = y;
    update(x);
    update(y);
    return y;
  }

  handle rotate_right(handle x) {
    handle y = nodes_[x].left;
    nodes_[x].left = nodes_[y].right;
    if (nodes_[y].right != npos) nodes_[nodes_[y].right].parent = x;
    nodes_[y].parent = nodes_[x].parent;
    replace_child(nodes_[x].parent, x, y);
    nodes_[y].right = x;
    nodes_[x].parent = y;
    update(x);
    update(y);
    return y;
  }

  void rebalance_from(handle h) {
    while (h != npos) {
      ++node_visits;
      update(h);
      const Node& n = nodes_[h];
      int balance = height_of(n.left) - height_of(n.right);
      if (balance > 1) {
        handle l = n.left;
        if (height_of(nodes_[l].left) < height_of(nodes_[l].right)) rotate_left(l);
        h = rotate_right(h);
      } else if (balance < -1) {
        handle r = n.right;
        if (height_of(nodes_[r].right) < height_of(nodes_[r].left)) rotate_right(r);
        h = rotate_left(h);
      }
      h = nodes_[h].parent;
    }
  }

  handle allocate(value_type v) {
    if (!free_.empty()) {
      handle h = free_.back();
      free_.pop_back();
      nodes_[h] = Node{std::move(v)};
      update(h);
      return h;
    }
    nodes_.push_back(Node{std::move(v)});
    handle h = static_cast<handle>(nodes_.size() - 1);
    update(h);
    return h;
  }

  void release(handle h) {
    nodes_[h] = Node{};
    free_.push_back(h);
  }

  std::vector<Node> nodes_;
  std::vector<handle> free_;
  handle root_ = npos;
  std::size_t size_ = 0;
};

}  // namespace rrix::detail
