#include <mutex>

#include "sequential_tree.hpp"
#include "variants.hpp"

namespace cbst::detail {
namespace {

// Every operation, searches included, runs under one tree-wide mutex.
class CoarseTree final : public SequentialTree {
 public:
  CoarseTree() : SequentialTree(Variant::kCoarse) {}

 private:
  bool do_search(Key key) override {
    std::lock_guard lock(mutex_);
    return seq_search(key);
  }
  bool do_insert(Key key) override {
    std::lock_guard lock(mutex_);
    yield_point();
    return seq_insert(key);
  }
  bool do_remove(Key key) override {
    std::lock_guard lock(mutex_);
    yield_point();
    return seq_remove(key);
  }

  std::mutex mutex_;
};

}  // namespace

std::unique_ptr<ConcurrentSet> make_coarse_tree() { return std::make_unique<CoarseTree>(); }

}  // namespace cbst::detail
