#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "cbst/key.hpp"
#include "cbst/node.hpp"

namespace cbst {

/// The six synchronization strategies over the same external tree.
enum class Variant : std::uint8_t {
  kSeq,     // no synchronization, single thread only
  kCoarse,  // one tree-wide mutex
  kFN,      // flag locks on nodes
  kFE,      // flag locks on edges
  kFEM,     // flag-and-mark locks on edges
  kTN,      // ticket locks on nodes with version validation
};

inline constexpr Variant kAllVariants[] = {Variant::kSeq, Variant::kCoarse, Variant::kFN,
                                           Variant::kFE,  Variant::kFEM,    Variant::kTN};
inline constexpr Variant kConcurrentVariants[] = {Variant::kCoarse, Variant::kFN, Variant::kFE,
                                                  Variant::kFEM, Variant::kTN};

/// Short lowercase name used on the command line and in output files.
std::string_view to_string(Variant v) noexcept;
/// Conventional display name ("FEM-BST", "SYN-BST", ...).
std::string_view display_name(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view text) noexcept;
constexpr bool is_thread_safe(Variant v) noexcept { return v != Variant::kSeq; }

/// The three nodes present in an empty tree. None of them is ever unlinked.
struct SentinelNodes {
  const NodeBase* root = nullptr;      // internal, key +inf
  const NodeBase* neg_leaf = nullptr;  // root's initial left leaf, key -inf
  const NodeBase* pos_leaf = nullptr;  // root's right leaf, key +inf
};

/// Set of application keys stored in an unbalanced external BST.
///
/// search/insert/remove throw InvalidKeyError for sentinel keys. Every
/// variant except kSeq may be shared freely between threads; kSeq must be
/// confined to one thread at a time. Structural inspection
/// (collect_leaf_keys, root) requires quiescence.
class ConcurrentSet {
 public:
  virtual ~ConcurrentSet() = default;
  ConcurrentSet(const ConcurrentSet&) = delete;
  ConcurrentSet& operator=(const ConcurrentSet&) = delete;

  Variant variant() const noexcept { return variant_; }

  bool search(Key key) {
    require_application_key(key);
    return do_search(key);
  }
  bool insert(Key key) {
    require_application_key(key);
    return do_insert(key);
  }
  bool remove(Key key) {
    require_application_key(key);
    return do_remove(key);
  }
  bool apply(OpKind op, Key key);

  /// Unsynchronized descent; only meaningful at quiescence or for tests.
  Snapshot find(Key key) const noexcept { return find_leaf(root_, key); }

  /// In-order leaf keys without sentinels.
  std::vector<Key> collect_leaf_keys() const;

  /// Outer-loop restarts across all operations since construction.
  std::uint64_t retry_count() const noexcept { return retries_.load(std::memory_order_relaxed); }
  /// Unsuccessful try-acquire calls since construction.
  std::uint64_t failed_lock_count() const noexcept {
    return failed_locks_.load(std::memory_order_relaxed);
  }

  const NodeBase* root() const noexcept { return root_; }
  SentinelNodes sentinels() const noexcept { return sentinels_; }

 protected:
  ConcurrentSet(Variant variant, NodeBase* root) noexcept;

  virtual bool do_search(Key key) = 0;
  virtual bool do_insert(Key key) = 0;
  virtual bool do_remove(Key key) = 0;

  void note_retry() noexcept;
  void note_failed_lock() noexcept;

  NodeBase* root_;

 private:
  Variant variant_;
  SentinelNodes sentinels_;
  std::atomic<std::uint64_t> retries_{0};
  std::atomic<std::uint64_t> failed_locks_{0};
};

std::unique_ptr<ConcurrentSet> make_tree(Variant variant);

}  // namespace cbst
