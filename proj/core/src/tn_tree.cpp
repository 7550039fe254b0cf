#include "cbst/locks.hpp"
#include "external_tree.hpp"
#include "variants.hpp"

namespace cbst::detail {
namespace {

// Ticket locks on nodes. Updates descend while sampling the version of each
// router before reading its child link. After locking, an unchanged version
// proves the link read during the descent is still current, so no link
// re-checks are needed. Inserts lock the parent; deletes lock grandparent
// then parent. A removed parent is never unlocked.
class TnTree final : public ExternalTree<LockedNode<TicketLock>> {
 public:
  TnTree() : ExternalTree(Variant::kTN) {}

 private:
  struct Stamp {
    std::uint64_t version = 0;
    bool free = false;  // lock not held when the version was sampled
  };

  struct VersionedSnapshot {
    Snapshot path;
    Stamp ppred;
    Stamp pred;
  };

  static Stamp stamp(const Node* node) noexcept {
    std::uint64_t version = node->lock.version_of();
    return {version, node->lock.ticket() == version};
  }

  VersionedSnapshot versioned_find(Key key) const noexcept {
    VersionedSnapshot s;
    NodeBase* curr = root_;
    while (!curr->leaf) {
      s.path.ppred = s.path.pred;
      s.path.pright = s.path.right;
      s.ppred = s.pred;
      s.path.pred = curr;
      s.pred = stamp(as_node(curr));
      s.path.right = goes_right(key, curr->key);
      curr = curr->load_child(s.path.right);
    }
    s.path.curr = curr;
    return s;
  }

  // Acquires `node` only if nobody has held it since `seen` was sampled.
  bool lock_if_unchanged(Node* node, Stamp seen) noexcept {
    if (!seen.free) return false;
    if (!node->lock.try_acquire()) {
      note_failed_lock();
      return false;
    }
    if (node->lock.version_of() != seen.version) {
      node->lock.release();
      return false;
    }
    return true;
  }

  bool do_search(Key key) override { return optimistic_search(key); }

  bool do_insert(Key key) override {
    auto guard = epoch_.pin();
    Backoff backoff;
    for (;; note_retry(), backoff.pause()) {
      VersionedSnapshot s = versioned_find(key);
      if (s.path.curr->key == key) return false;
      Node* pred = as_node(s.path.pred);
      yield_point();
      if (!lock_if_unchanged(pred, s.pred)) continue;
      yield_point();
      pred->store_child(s.path.right, build_router(key, s.path.curr));
      pred->lock.release();
      return true;
    }
  }

  bool do_remove(Key key) override {
    auto guard = epoch_.pin();
    Backoff backoff;
    for (;; note_retry(), backoff.pause()) {
      VersionedSnapshot s = versioned_find(key);
      if (s.path.curr->key != key) return false;
      Node* ppred = as_node(s.path.ppred);
      Node* pred = as_node(s.path.pred);
      yield_point();
      if (!lock_if_unchanged(ppred, s.ppred)) continue;
      if (!lock_if_unchanged(pred, s.pred)) {
        ppred->lock.release();
        continue;
      }
      yield_point();
      ppred->store_child(s.path.pright, pred->load_child(!s.path.right));
      ppred->lock.release();
      guard.retire(pred);
      guard.retire(s.path.curr);
      return true;
    }
  }
};

}  // namespace

std::unique_ptr<ConcurrentSet> make_tn_tree() { return std::make_unique<TnTree>(); }

}  // namespace cbst::detail
