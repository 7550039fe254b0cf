#pragma once

#include "external_tree.hpp"

namespace cbst::detail {

/// Plain external-tree operations with no synchronization. Unlinked nodes
/// are freed immediately, so callers must exclude concurrent readers.
class SequentialTree : public ExternalTree<NodeBase> {
 protected:
  using ExternalTree::ExternalTree;

  bool seq_search(Key key) const noexcept { return find_leaf(root_, key).curr->key == key; }

  bool seq_insert(Key key) {
    Snapshot s = find_leaf(root_, key);
    if (s.curr->key == key) return false;
    s.pred->store_child(s.right, build_router(key, s.curr));
    return true;
  }

  bool seq_remove(Key key) {
    Snapshot s = find_leaf(root_, key);
    if (s.curr->key != key) return false;
    // A matched application leaf is never a child of the root.
    s.ppred->store_child(s.pright, s.pred->load_child(!s.right));
    delete s.pred;
    delete s.curr;
    return true;
  }
};

}  // namespace cbst::detail
