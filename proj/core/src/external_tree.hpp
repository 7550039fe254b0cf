#pragma once

#include <vector>

#include "cbst/contention.hpp"
#include "cbst/epoch.hpp"
#include "cbst/tree.hpp"

namespace cbst::detail {

/// Allocation, teardown and reclamation shared by all variants. NodeT is
/// the variant's node type; every node in the tree is a NodeT.
template <class NodeT>
class ExternalTree : public ConcurrentSet {
 protected:
  using Node = NodeT;

  explicit ExternalTree(Variant variant)
      : ConcurrentSet(variant, make_initial()), epoch_(&destroy_node) {}

  ~ExternalTree() override {
    std::vector<NodeBase*> stack{root_};
    while (!stack.empty()) {
      NodeBase* node = stack.back();
      stack.pop_back();
      if (!node->leaf) {
        stack.push_back(node->left());
        stack.push_back(node->right());
      }
      delete as_node(node);
    }
  }

  static Node* as_node(NodeBase* node) noexcept { return static_cast<Node*>(node); }

  static void destroy_node(void* node) noexcept { delete static_cast<Node*>(node); }

  /// Replacement for leaf `curr` holding both `key` and curr: a router
  /// keyed by the larger of the two, smaller key on the left. curr itself
  /// is reused, so sentinel leaves stay in the tree.
  static NodeBase* build_router(Key key, NodeBase* curr) {
    auto* leaf = new Node(key, true);
    if (key < curr->key) return new Node(curr->key, leaf, curr);
    return new Node(key, curr, leaf);
  }

  bool optimistic_search(Key key) {
    auto guard = epoch_.pin();
    return find_leaf(root_, key).curr->key == key;
  }

  EpochDomain epoch_;

 private:
  static NodeBase* make_initial() {
    return new Node(kPosInf, new Node(kNegInf, true), new Node(kPosInf, true));
  }
};

}  // namespace cbst::detail
