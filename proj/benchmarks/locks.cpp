#include <benchmark/benchmark.h>

#include "cbst/locks.hpp"

namespace {

template <class Lock>
void BM_UncontendedCycle(benchmark::State& state) {
  Lock lock;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lock.try_acquire());
    lock.release();
  }
}
BENCHMARK_TEMPLATE(BM_UncontendedCycle, cbst::FlagLock);
BENCHMARK_TEMPLATE(BM_UncontendedCycle, cbst::FlagMarkWord);
BENCHMARK_TEMPLATE(BM_UncontendedCycle, cbst::TicketLock);

template <class Lock>
void BM_ContendedCycle(benchmark::State& state) {
  static Lock lock;
  for (auto _ : state) {
    while (!lock.try_acquire()) {
    }
    lock.release();
  }
}
BENCHMARK_TEMPLATE(BM_ContendedCycle, cbst::FlagLock)->ThreadRange(1, 8)->UseRealTime();
BENCHMARK_TEMPLATE(BM_ContendedCycle, cbst::FlagMarkWord)->ThreadRange(1, 8)->UseRealTime();
BENCHMARK_TEMPLATE(BM_ContendedCycle, cbst::TicketLock)->ThreadRange(1, 8)->UseRealTime();

}  // namespace
