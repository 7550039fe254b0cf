#pragma once

#include <atomic>

#include "cbst/key.hpp"

namespace cbst {

/// External-tree node. Leaves carry dictionary keys; internal nodes are
/// routers with exactly two children. The key never changes after
/// construction.
struct NodeBase {
  NodeBase(Key k, bool is_leaf) noexcept : key(k), leaf(is_leaf) {}
  NodeBase(Key k, NodeBase* left, NodeBase* right) noexcept : key(k), leaf(false) {
    child[0].store(left, std::memory_order_relaxed);
    child[1].store(right, std::memory_order_relaxed);
  }
  NodeBase(const NodeBase&) = delete;
  NodeBase& operator=(const NodeBase&) = delete;

  NodeBase* load_child(bool right) const noexcept {
    return child[right].load(std::memory_order_acquire);
  }
  void store_child(bool right, NodeBase* node) noexcept {
    child[right].store(node, std::memory_order_release);
  }
  NodeBase* left() const noexcept { return load_child(false); }
  NodeBase* right() const noexcept { return load_child(true); }

  const Key key;
  const bool leaf;
  std::atomic<NodeBase*> child[2]{nullptr, nullptr};
};

/// Node carrying the variant's lock word.
template <class LockWord>
struct LockedNode : NodeBase {
  using NodeBase::NodeBase;
  LockWord lock;
};

/// Result of a root-to-leaf descent. Each link held at the moment it was
/// read; nothing is validated.
struct Snapshot {
  NodeBase* ppred = nullptr;  // grandparent, null when pred is the root
  bool pright = false;        // pred is ppred's right child
  NodeBase* pred = nullptr;   // parent of curr, always internal
  bool right = false;         // curr is pred's right child
  NodeBase* curr = nullptr;   // leaf reached
};

/// Routing rule: keys smaller than a router go left, all others go right.
constexpr bool goes_right(Key key, Key router) noexcept { return !(key < router); }

/// Optimistic descent from `root` recording the last two hops.
inline Snapshot find_leaf(NodeBase* root, Key key) noexcept {
  Snapshot s;
  NodeBase* curr = root;
  while (!curr->leaf) {
    s.ppred = s.pred;
    s.pright = s.right;
    s.pred = curr;
    s.right = goes_right(key, curr->key);
    curr = curr->load_child(s.right);
  }
  s.curr = curr;
  return s;
}

}  // namespace cbst
