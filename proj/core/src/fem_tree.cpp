#include "cbst/locks.hpp"
#include "external_tree.hpp"
#include "variants.hpp"

namespace cbst::detail {
namespace {

// Flag-and-mark edge locking. A locked child guards the edge into it; a
// marked node is being (or has been) removed. Inserts lock only the leaf
// they replace. Deletes lock the parent, then the leaf, and wait for the
// sibling to be free before swinging the grandparent's link. Removed parent
// and leaf keep their flag and mark forever.
//
// Ordering: an insert locks its leaf before reading the parent's mark, and a
// delete marks the parent before reading the sibling's flag. With all of
// these sequentially consistent, at least one side observes the other.
class FemTree final : public ExternalTree<LockedNode<FlagMarkWord>> {
 public:
  FemTree() : ExternalTree(Variant::kFEM) {}

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
      // Parent already being deleted.
      if (pred->lock.is_marked()) {
        curr->lock.release();
        continue;
      }
      // Parent no longer points at curr.
      if (pred->load_child(s.right) != curr) {
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

      if (pred->lock.is_marked()) continue;
      if (!pred->lock.try_acquire()) {
        note_failed_lock();
        continue;
      }
      pred->lock.set_marked(true);
      yield_point();

      // Grandparent removed, or no longer pointing at pred.
      if (ppred->lock.is_marked() || ppred->load_child(s.pright) != pred) {
        pred->lock.set_marked(false);
        pred->lock.release();
        continue;
      }
      if (!curr->lock.try_acquire()) {
        note_failed_lock();
        pred->lock.set_marked(false);
        pred->lock.release();
        continue;
      }
      curr->lock.set_marked(true);
      yield_point();
      if (pred->load_child(s.right) != curr) {
        curr->lock.set_marked(false);
        curr->lock.release();
        pred->lock.set_marked(false);
        pred->lock.release();
        continue;
      }

      // Wait until the sibling link is stable: its target must be unlocked
      // when observed still linked. The flag check has to come first; a
      // sibling seen free and still linked cannot be locked again by an
      // insert, because pred is marked.
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

std::unique_ptr<ConcurrentSet> make_fem_tree() { return std::make_unique<FemTree>(); }

}  // namespace cbst::detail
