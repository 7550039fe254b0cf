#include <gtest/gtest.h>

#include <map>
#include <random>

#include "cbst/seq_oracle.hpp"

namespace cbst {
namespace {

TEST(SeqOracle, InsertIntoEmptySet) {
  SeqOracle oracle;
  EXPECT_TRUE(oracle.apply(OpKind::kInsert, 5));
  EXPECT_EQ(oracle.keys(), std::vector<Key>{5});
}

TEST(SeqOracle, DuplicateInsertIsRejected) {
  SeqOracle oracle({5});
  EXPECT_FALSE(oracle.apply(OpKind::kInsert, 5));
  EXPECT_EQ(oracle.keys(), std::vector<Key>{5});
}

TEST(SeqOracle, DeleteOfAbsentKeyFails) {
  SeqOracle oracle({5});
  EXPECT_FALSE(oracle.apply(OpKind::kDelete, 7));
  EXPECT_EQ(oracle.keys(), std::vector<Key>{5});
}

TEST(SeqOracle, SearchDoesNotMutate) {
  SeqOracle oracle({1, 3});
  EXPECT_TRUE(oracle.apply(OpKind::kSearch, 3));
  EXPECT_FALSE(oracle.apply(OpKind::kSearch, 2));
  EXPECT_EQ(oracle.keys(), (std::vector<Key>{1, 3}));
}

TEST(SeqOracle, SentinelsAreRejected) {
  SeqOracle oracle;
  for (OpKind op : kAllOpKinds) {
    EXPECT_THROW(oracle.apply(op, kNegInf), InvalidKeyError);
    EXPECT_THROW(oracle.apply(op, kPosInf), InvalidKeyError);
  }
  EXPECT_THROW(SeqOracle({kPosInf}), InvalidKeyError);
}

TEST(Keys, SentinelsBoundApplicationRange) {
  EXPECT_TRUE(is_sentinel(kNegInf));
  EXPECT_TRUE(is_sentinel(kPosInf));
  EXPECT_TRUE(is_application_key(kNegInf + 1));
  EXPECT_TRUE(is_application_key(kPosInf - 1));
  EXPECT_LT(kNegInf, Key{0});
  EXPECT_GT(kPosInf, Key{0});
}

TEST(Keys, OpKindNamesRoundTrip) {
  for (OpKind op : kAllOpKinds) EXPECT_EQ(parse_op_kind(to_string(op)), op);
  EXPECT_FALSE(parse_op_kind("insert").has_value());
}

// Final contents are exactly the keys with one more successful insert than
// successful delete, and per key the successes alternate from an insert.
TEST(SeqOracle, SuccessfulUpdatesAlternatePerKey) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    SeqOracle oracle;
    std::map<Key, std::vector<OpKind>> successes;
    for (int i = 0; i < 500; ++i) {
      auto op = static_cast<OpKind>(rng() % 3);
      Key key = static_cast<Key>(rng() % 20);
      if (oracle.apply(op, key) && op != OpKind::kSearch) successes[key].push_back(op);
    }
    for (const auto& [key, ops] : successes) {
      for (std::size_t i = 0; i < ops.size(); ++i) {
        EXPECT_EQ(ops[i], i % 2 == 0 ? OpKind::kInsert : OpKind::kDelete);
      }
      EXPECT_EQ(oracle.contains(key), ops.size() % 2 == 1);
    }
  }
}

TEST(SeqOracle, ReplayIsDeterministic) {
  auto run = [] {
    std::mt19937_64 rng(99);
    SeqOracle oracle;
    std::vector<bool> results;
    for (int i = 0; i < 1000; ++i) {
      results.push_back(oracle.apply(static_cast<OpKind>(rng() % 3), static_cast<Key>(rng() % 50)));
    }
    return std::make_pair(results, oracle.keys());
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace cbst
