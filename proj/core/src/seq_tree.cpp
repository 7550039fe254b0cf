#include "sequential_tree.hpp"
#include "variants.hpp"

namespace cbst::detail {
namespace {

class SeqTree final : public SequentialTree {
 public:
  SeqTree() : SequentialTree(Variant::kSeq) {}

 private:
  bool do_search(Key key) override { return seq_search(key); }
  bool do_insert(Key key) override { return seq_insert(key); }
  bool do_remove(Key key) override { return seq_remove(key); }
};

}  // namespace

std::unique_ptr<ConcurrentSet> make_seq_tree() { return std::make_unique<SeqTree>(); }

}  // namespace cbst::detail
