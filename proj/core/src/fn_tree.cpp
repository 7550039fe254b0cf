#include "cbst/locks.hpp"
#include "external_tree.hpp"
#include "variants.hpp"

namespace cbst::detail {
namespace {

// Flag locks on nodes. Inserts lock parent then leaf; deletes lock
// grandparent, parent, leaf, always top-down with try-acquire and full
// rollback on failure. Holding a node's flag freezes its links. Removed
// nodes keep their flag forever, so acquiring a flag proves the node is
// still in the tree.
class FnTree final : public ExternalTree<LockedNode<FlagLock>> {
 public:
  FnTree() : ExternalTree(Variant::kFN) {}

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

      if (!pred->lock.try_acquire()) {
        note_failed_lock();
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
      pred->store_child(s.right, build_router(key, curr));
      curr->lock.release();
      pred->lock.release();
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

      if (!ppred->lock.try_acquire()) {
        note_failed_lock();
        continue;
      }
      if (!pred->lock.try_acquire()) {
        note_failed_lock();
        ppred->lock.release();
        continue;
      }
      if (!curr->lock.try_acquire()) {
        note_failed_lock();
        pred->lock.release();
        ppred->lock.release();
        continue;
      }
      yield_point();
      if (ppred->load_child(s.pright) != pred || pred->load_child(s.right) != curr) {
        curr->lock.release();
        pred->lock.release();
        ppred->lock.release();
        continue;
      }
      ppred->store_child(s.pright, pred->load_child(!s.right));
      ppred->lock.release();
      guard.retire(pred);
      guard.retire(curr);
      return true;
    }
  }
};

}  // namespace

std::unique_ptr<ConcurrentSet> make_fn_tree() { return std::make_unique<FnTree>(); }

}  // namespace cbst::detail
