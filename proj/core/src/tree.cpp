#include "cbst/tree.hpp"

#include "cbst/contention.hpp"
#include "variants.hpp"

namespace cbst {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::kSeq:
      return "seq";
    case Variant::kCoarse:
      return "coarse";
    case Variant::kFN:
      return "fn";
    case Variant::kFE:
      return "fe";
    case Variant::kFEM:
      return "fem";
    case Variant::kTN:
      return "tn";
  }
  return "?";
}

std::string_view display_name(Variant v) noexcept {
  switch (v) {
    case Variant::kSeq:
      return "BST";
    case Variant::kCoarse:
      return "SYN-BST";
    case Variant::kFN:
      return "FN-BST";
    case Variant::kFE:
      return "FE-BST";
    case Variant::kFEM:
      return "FEM-BST";
    case Variant::kTN:
      return "TN-BST";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view text) noexcept {
  for (Variant v : kAllVariants) {
    if (text == to_string(v) || text == display_name(v)) return v;
  }
  return std::nullopt;
}

ConcurrentSet::ConcurrentSet(Variant variant, NodeBase* root) noexcept
    : root_(root),
      variant_(variant),
      sentinels_{root, root->left(), root->right()} {}

bool ConcurrentSet::apply(OpKind op, Key key) {
  switch (op) {
    case OpKind::kSearch:
      return search(key);
    case OpKind::kInsert:
      return insert(key);
    case OpKind::kDelete:
      return remove(key);
  }
  return false;
}

std::vector<Key> ConcurrentSet::collect_leaf_keys() const {
  std::vector<Key> keys;
  std::vector<const NodeBase*> stack{root_};
  while (!stack.empty()) {
    const NodeBase* node = stack.back();
    stack.pop_back();
    if (node->leaf) {
      if (is_application_key(node->key)) keys.push_back(node->key);
    } else {
      stack.push_back(node->right());
      stack.push_back(node->left());
    }
  }
  return keys;
}

void ConcurrentSet::note_retry() noexcept {
  retries_.fetch_add(1, std::memory_order_relaxed);
  ++this_thread_counters().retries;
}

void ConcurrentSet::note_failed_lock() noexcept {
  failed_locks_.fetch_add(1, std::memory_order_relaxed);
  ++this_thread_counters().failed_locks;
}

std::unique_ptr<ConcurrentSet> make_tree(Variant variant) {
  switch (variant) {
    case Variant::kSeq:
      return detail::make_seq_tree();
    case Variant::kCoarse:
      return detail::make_coarse_tree();
    case Variant::kFN:
      return detail::make_fn_tree();
    case Variant::kFE:
      return detail::make_fe_tree();
    case Variant::kFEM:
      return detail::make_fem_tree();
    case Variant::kTN:
      return detail::make_tn_tree();
  }
  return nullptr;
}

}  // namespace cbst
