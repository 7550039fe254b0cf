#include <benchmark/benchmark.h>

#include <array>
#include <memory>

#include "cbst/bench.hpp"

namespace {

using cbst::Variant;

// One shared tree per variant, rebuilt before each benchmark run.
std::array<std::unique_ptr<cbst::ConcurrentSet>, std::size(cbst::kAllVariants)> g_trees;

template <Variant V, cbst::Key Range>
void setup(const benchmark::State&) {
  auto& tree = g_trees[static_cast<std::size_t>(V)];
  tree = cbst::make_tree(V);
  cbst::prefill(*tree, cbst::WorkloadSpec::low_contention(Range), 1);
}

template <Variant V, cbst::Key Range>
void teardown(const benchmark::State&) {
  g_trees[static_cast<std::size_t>(V)].reset();
}

template <Variant V, cbst::Key Range, unsigned Insert, unsigned Delete>
void BM_Mix(benchmark::State& state) {
  auto& tree = *g_trees[static_cast<std::size_t>(V)];
  cbst::OpGenerator gen({Insert, Delete, 100 - Insert - Delete, Range}, 7,
                        static_cast<std::uint64_t>(state.thread_index()));
  for (auto _ : state) {
    auto draw = gen.next();
    benchmark::DoNotOptimize(tree.apply(draw.op, draw.key));
  }
  state.SetItemsProcessed(state.iterations());
}

#define CBST_MIX(V, RANGE, I, D)                                  \
  BENCHMARK_TEMPLATE(BM_Mix, V, RANGE, I, D)                      \
      ->Setup(setup<V, RANGE>)                                    \
      ->Teardown(teardown<V, RANGE>)                              \
      ->ThreadRange(1, 8)                                         \
      ->UseRealTime()

#define CBST_ALL(RANGE, I, D)               \
  CBST_MIX(Variant::kCoarse, RANGE, I, D);  \
  CBST_MIX(Variant::kFN, RANGE, I, D);      \
  CBST_MIX(Variant::kFE, RANGE, I, D);      \
  CBST_MIX(Variant::kFEM, RANGE, I, D);     \
  CBST_MIX(Variant::kTN, RANGE, I, D);      \
  BENCHMARK_TEMPLATE(BM_Mix, Variant::kSeq, RANGE, I, D)  \
      ->Setup(setup<Variant::kSeq, RANGE>)                \
      ->Teardown(teardown<Variant::kSeq, RANGE>)

CBST_ALL(10000, 9, 1);
CBST_ALL(10000, 20, 10);

void BM_SearchOnly(benchmark::State& state) {
  auto tree = cbst::make_tree(static_cast<Variant>(state.range(0)));
  cbst::prefill(*tree, cbst::WorkloadSpec::low_contention(100000), 1);
  cbst::OpGenerator gen(cbst::WorkloadSpec::low_contention(100000), 3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(tree->search(gen.next_key()));
  state.SetLabel(std::string(cbst::display_name(tree->variant())));
}
BENCHMARK(BM_SearchOnly)->DenseRange(0, std::size(cbst::kAllVariants) - 1);

}  // namespace
