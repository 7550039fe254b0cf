#include "cbst/locks.hpp"
#include "external_tree.hpp"
#include "variants.hpp"

namespace cbst::detail {
namespace {

// Flag locks on edges without mark bits. Validation is by re-reading links
// only. With no mark to consult, a held flag on an internal node is taken
// to mean "possibly being removed": inserts back off from a locked parent,
// deletes back off from a locked grandparent. Removed nodes keep their flag
// forever, which makes that reading exact for retired nodes.
class FeTree final : public ExternalTree<LockedNode<FlagLock>> {
 public:
  FeTree() : ExternalTree(Variant::kFE) {}

 private:
  bool do_search(Key key) override { return optimistic_search(key); }

  bool do_insert(Key key) override {
    auto guard = epoch_.pin();
    Backoff backoff;
    for (;; note_retry(), backoff.pause()) {
      Snapshot s = find_leaf(root_, key);
      if (s.curr->key == key) return false;
      Node* pred = as_node(s.pred);
      Node* curr = as_node(s.curr);
      yield_point();

      if (!curr->lock.try_acquire()) {
        note_failed_lock();
        continue;
      }
      yield_point();
      if (pred->lock.is_locked() || pred->load_child(s.right) != curr) {
        curr->lock.release();
        continue;
      }
      yield_point();
      pred->store_child(s.right, build_router(key, curr));
      curr->lock.release();
      return true;
    }
  }

  bool do_remove(Key key) override {
    auto guard = epoch_.pin();
    Backoff backoff;
    for (;; note_retry(), backoff.pause()) {
      Snapshot s = find_leaf(root_, key);
      if (s.curr->key != key) return false;
      Node* ppred = as_node(s.ppred);
      Node* pred = as_node(s.pred);
      Node* curr = as_node(s.curr);
      yield_point();

      if (!pred->lock.try_acquire()) {
        note_failed_lock();
        continue;
      }
      yield_point();
      if (ppred->lock.is_locked() || ppred->load_child(s.pright) != pred) {
        pred->lock.release();
        continue;
      }
      if (!curr->lock.try_acquire()) {
        note_failed_lock();
        pred->lock.release();
        continue;
      }
      yield_point();
      if (pred->load_child(s.right) != curr) {
        curr->lock.release();
        pred->lock.release();
        continue;
      }

      NodeBase* sibling = pred->load_child(!s.right);
      Backoff wait;
      for (;;) {
        if (as_node(sibling)->lock.is_locked() || pred->load_child(!s.right) != sibling) {
          sibling = pred->load_child(!s.right);
          wait.pause();
          continue;
        }
        break;
      }
      yield_point();
      ppred->store_child(s.pright, sibling);
      guard.retire(pred);
      guard.retire(curr);
      return true;
    }
  }
};

}  // namespace

std::unique_ptr<ConcurrentSet> make_fe_tree() { return std::make_unique<FeTree>(); }

}  // namespace cbst::detail
