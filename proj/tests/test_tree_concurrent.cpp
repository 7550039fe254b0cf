#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <thread>

#include "cbst/contention.hpp"
#include "cbst/structure.hpp"
#include "cbst/tree.hpp"

namespace cbst {
namespace {

class YieldInjection {
 public:
  explicit YieldInjection(unsigned one_in) { set_yield_injection(one_in); }
  ~YieldInjection() { set_yield_injection(0); }
};

class ConcurrentTreeTest : public ::testing::TestWithParam<Variant> {
 protected:
  std::unique_ptr<ConcurrentSet> tree = make_tree(GetParam());
};

// Each thread owns the keys congruent to its index, so the final contents
// are known exactly.
TEST_P(ConcurrentTreeTest, DisjointKeysEndInKnownState) {
  YieldInjection yields(8);
  constexpr unsigned kThreads = 4;
  constexpr Key kPerThread = 2000;
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < kThreads; ++t) {
    workers.emplace_back([&, t] {
      for (Key i = 0; i < kPerThread; ++i) {
        Key key = i * kThreads + t;
        EXPECT_TRUE(tree->insert(key));
      }
      for (Key i = 0; i < kPerThread; i += 2) {
        Key key = i * kThreads + t;
        EXPECT_TRUE(tree->remove(key));
        EXPECT_FALSE(tree->search(key));
      }
    });
  }
  for (auto& w : workers) w.join();

  std::vector<Key> expected;
  for (Key i = 0; i < kPerThread; ++i) {
    if (i % 2 == 1) {
      for (unsigned t = 0; t < kThreads; ++t) expected.push_back(i * kThreads + t);
    }
  }
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(tree->collect_leaf_keys(), expected);
  InvariantReport report = check_structure(*tree);
  EXPECT_TRUE(report.ok()) << (report.violations.empty() ? "" : report.violations.front());
}

// All threads fight over a handful of keys. Per key, successful inserts
// minus successful deletes must equal final membership.
TEST_P(ConcurrentTreeTest, HotKeysStayBalanced) {
  YieldInjection yields(4);
  constexpr unsigned kThreads = 4;
  constexpr Key kKeys = 4;
  std::vector<std::array<long, kKeys>> net(kThreads);
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < kThreads; ++t) {
    net[t].fill(0);
    workers.emplace_back([&, t] {
      std::mt19937_64 rng(t + 1);
      for (int i = 0; i < 20000; ++i) {
        Key key = static_cast<Key>(rng() % kKeys);
        if (rng() % 2 == 0) {
          if (tree->insert(key)) ++net[t][key];
        } else {
          if (tree->remove(key)) --net[t][key];
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  std::vector<Key> final_keys = tree->collect_leaf_keys();
  std::set<Key> present(final_keys.begin(), final_keys.end());
  for (Key k = 0; k < kKeys; ++k) {
    long total = 0;
    for (const auto& counts : net) total += counts[k];
    EXPECT_EQ(total, present.count(k) ? 1 : 0) << "key " << k;
  }
  EXPECT_TRUE(check_structure(*tree).ok());
  if (GetParam() != Variant::kCoarse) {
    EXPECT_GT(tree->retry_count(), 0u);
  }
}

TEST_P(ConcurrentTreeTest, SearchersSeeStableKeysThroughChurn) {
  for (Key k = 0; k < 100; k += 10) tree->insert(k);
  std::atomic<bool> stop{false};
  std::atomic<bool> missed{false};
  std::thread reader([&] {
    while (!stop) {
      for (Key k = 0; k < 100; k += 10) {
        if (!tree->search(k)) missed = true;
      }
    }
  });
  std::vector<std::thread> writers;
  for (unsigned t = 0; t < 3; ++t) {
    writers.emplace_back([&, t] {
      std::mt19937_64 rng(t);
      for (int i = 0; i < 20000; ++i) {
        Key key = static_cast<Key>(rng() % 100);
        if (key % 10 == 0) continue;
        if (rng() % 2) tree->insert(key); else tree->remove(key);
      }
    });
  }
  for (auto& w : writers) w.join();
  stop = true;
  reader.join();
  EXPECT_FALSE(missed.load());
  EXPECT_TRUE(check_structure(*tree).ok());
}

TEST_P(ConcurrentTreeTest, DisjointFarApartRangesRetryRarely) {
  constexpr int kOps = 5000;
  std::thread low([&] {
    for (Key k = 0; k < kOps; ++k) tree->insert(k);
  });
  std::thread high([&] {
    for (Key k = 0; k < kOps; ++k) tree->insert(1'000'000'000 + k);
  });
  low.join();
  high.join();
  EXPECT_LT(tree->retry_count(), std::uint64_t{kOps} * 2 / 10);
  EXPECT_EQ(tree->collect_leaf_keys().size(), 2u * kOps);
}

INSTANTIATE_TEST_SUITE_P(Concurrent, ConcurrentTreeTest, ::testing::ValuesIn(kConcurrentVariants),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Contention, ThreadCountersTrackTreeCounters) {
  YieldInjection yields(2);
  auto tree = make_tree(Variant::kFEM);
  std::atomic<std::uint64_t> thread_sum{0};
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < 4; ++t) {
    workers.emplace_back([&] {
      ThreadCounters before = this_thread_counters();
      for (int i = 0; i < 5000; ++i) {
        tree->insert(1);
        tree->remove(1);
      }
      thread_sum += this_thread_counters().retries - before.retries;
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(thread_sum.load(), tree->retry_count());
}

}  // namespace
}  // namespace cbst
