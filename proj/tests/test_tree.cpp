#include <gtest/gtest.h>

#include <random>

#include "cbst/seq_oracle.hpp"
#include "cbst/structure.hpp"
#include "cbst/tree.hpp"

namespace cbst {
namespace {

class TreeTest : public ::testing::TestWithParam<Variant> {
 protected:
  std::unique_ptr<ConcurrentSet> tree = make_tree(GetParam());
};

TEST_P(TreeTest, InitialShapeHasThreeSentinelNodes) {
  const NodeBase* root = tree->root();
  ASSERT_FALSE(root->leaf);
  EXPECT_EQ(root->key, kPosInf);
  EXPECT_TRUE(root->left()->leaf);
  EXPECT_EQ(root->left()->key, kNegInf);
  EXPECT_TRUE(root->right()->leaf);
  EXPECT_EQ(root->right()->key, kPosInf);
  EXPECT_TRUE(tree->collect_leaf_keys().empty());
  EXPECT_FALSE(tree->search(5));
  EXPECT_TRUE(check_structure(*tree).ok());
}

TEST_P(TreeTest, FindOnEmptyTreeReachesNegativeSentinel) {
  Snapshot s = tree->find(5);
  EXPECT_EQ(s.ppred, nullptr);
  EXPECT_EQ(s.pred, tree->root());
  EXPECT_FALSE(s.right);
  EXPECT_EQ(s.curr->key, kNegInf);
}

TEST_P(TreeTest, InsertBuildsRouterKeyedByLargerKey) {
  ASSERT_TRUE(tree->insert(5));
  const NodeBase* router = tree->root()->left();
  ASSERT_FALSE(router->leaf);
  EXPECT_EQ(router->key, 5);
  EXPECT_EQ(router->left()->key, kNegInf);
  EXPECT_EQ(router->right()->key, 5);
  EXPECT_EQ(router->left(), tree->sentinels().neg_leaf);

  EXPECT_EQ(tree->find(5).curr->key, 5);
  Snapshot s7 = tree->find(7);
  EXPECT_EQ(s7.curr->key, 5);
  EXPECT_TRUE(s7.right);
  EXPECT_EQ(s7.ppred, tree->root());
  EXPECT_FALSE(s7.pright);
}

TEST_P(TreeTest, DuplicateInsertFails) {
  EXPECT_TRUE(tree->insert(5));
  EXPECT_FALSE(tree->insert(5));
  EXPECT_EQ(tree->collect_leaf_keys(), std::vector<Key>{5});
}

TEST_P(TreeTest, InsertsLandInOrder) {
  for (Key k : {5, 3, 7}) EXPECT_TRUE(tree->insert(k));
  EXPECT_EQ(tree->collect_leaf_keys(), (std::vector<Key>{3, 5, 7}));
  EXPECT_TRUE(check_structure(*tree).ok());
  EXPECT_TRUE(tree->remove(5));
  EXPECT_EQ(tree->collect_leaf_keys(), (std::vector<Key>{3, 7}));
  EXPECT_TRUE(check_structure(*tree).ok());
}

TEST_P(TreeTest, DeleteRestoresInitialShape) {
  ASSERT_TRUE(tree->insert(5));
  ASSERT_TRUE(tree->remove(5));
  EXPECT_TRUE(tree->collect_leaf_keys().empty());
  EXPECT_EQ(tree->root()->left(), tree->sentinels().neg_leaf);
  EXPECT_EQ(tree->root()->right(), tree->sentinels().pos_leaf);
  EXPECT_FALSE(tree->search(5));
}

TEST_P(TreeTest, DeleteOnEmptyTreeFails) { EXPECT_FALSE(tree->remove(5)); }

// insert 5 then 3 nests router(3) under router(5); removing 3 splices the
// negative sentinel (3's sibling) back under router(5).
TEST_P(TreeTest, DeleteSplicesSiblingToGrandparent) {
  ASSERT_TRUE(tree->insert(5));
  ASSERT_TRUE(tree->insert(3));
  const NodeBase* router5 = tree->root()->left();
  ASSERT_EQ(router5->left()->key, 3);
  ASSERT_FALSE(router5->left()->leaf);
  ASSERT_TRUE(tree->remove(3));
  EXPECT_EQ(tree->root()->left(), router5);
  EXPECT_EQ(router5->left(), tree->sentinels().neg_leaf);
  EXPECT_EQ(router5->right()->key, 5);
  EXPECT_EQ(tree->collect_leaf_keys(), std::vector<Key>{5});
}

TEST_P(TreeTest, EqualKeysRouteRight) {
  ASSERT_TRUE(tree->insert(10));
  ASSERT_TRUE(tree->insert(20));
  // Router 10 sends 10 right, into router 20, which sends it left.
  Snapshot s = tree->find(10);
  EXPECT_EQ(s.ppred->key, 10);
  EXPECT_TRUE(s.pright);
  EXPECT_EQ(s.pred->key, 20);
  EXPECT_FALSE(s.right);
  EXPECT_EQ(s.curr->key, 10);
}

TEST_P(TreeTest, SentinelKeysAreRejected) {
  EXPECT_THROW(tree->search(kNegInf), InvalidKeyError);
  EXPECT_THROW(tree->insert(kPosInf), InvalidKeyError);
  EXPECT_THROW(tree->remove(kNegInf), InvalidKeyError);
  EXPECT_TRUE(tree->insert(kNegInf + 1));
  EXPECT_TRUE(tree->insert(kPosInf - 1));
  EXPECT_EQ(tree->collect_leaf_keys(), (std::vector<Key>{kNegInf + 1, kPosInf - 1}));
}

TEST_P(TreeTest, MatchesOracleSingleThreaded) {
  std::mt19937_64 rng(1234);
  SeqOracle oracle;
  for (int i = 0; i < 20000; ++i) {
    auto op = static_cast<OpKind>(rng() % 3);
    Key key = static_cast<Key>(rng() % 200) - 100;
    ASSERT_EQ(tree->apply(op, key), oracle.apply(op, key)) << "op " << i;
  }
  EXPECT_EQ(tree->collect_leaf_keys(), oracle.keys());
  EXPECT_TRUE(check_structure(*tree).ok());
  EXPECT_EQ(tree->retry_count(), 0u);
  EXPECT_EQ(tree->failed_lock_count(), 0u);
}

// Deep left spine exercises the iterative traversal and destructor.
TEST_P(TreeTest, DegenerateDepth) {
  for (Key k = 5000; k > 0; --k) ASSERT_TRUE(tree->insert(k));
  EXPECT_EQ(tree->collect_leaf_keys().size(), 5000u);
  EXPECT_TRUE(check_structure(*tree).ok());
  for (Key k = 1; k <= 5000; k += 2) ASSERT_TRUE(tree->remove(k));
  EXPECT_EQ(tree->collect_leaf_keys().size(), 2500u);
}

INSTANTIATE_TEST_SUITE_P(AllVariants, TreeTest, ::testing::ValuesIn(kAllVariants),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Variant, NamesRoundTrip) {
  for (Variant v : kAllVariants) {
    EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_EQ(parse_variant(display_name(v)), v);
  }
  EXPECT_EQ(display_name(Variant::kCoarse), "SYN-BST");
  EXPECT_FALSE(parse_variant("avl").has_value());
  EXPECT_FALSE(is_thread_safe(Variant::kSeq));
}

TEST(Variant, SeqAndFemAgreeOnPairedReplay) {
  auto seq = make_tree(Variant::kSeq);
  auto fem = make_tree(Variant::kFEM);
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    auto op = static_cast<OpKind>(rng() % 3);
    Key key = static_cast<Key>(rng() % 64);
    ASSERT_EQ(seq->apply(op, key), fem->apply(op, key));
  }
}

}  // namespace
}  // namespace cbst
