#pragma once

#include <atomic>
#include <cstdint>
#include <thread>

namespace cbst {

/// Per-thread tallies maintained by every tree variant. Bench workers read
/// deltas of these around their measured window.
struct ThreadCounters {
  std::uint64_t retries = 0;       // restarts of an operation's outer loop
  std::uint64_t failed_locks = 0;  // unsuccessful try-acquire calls
};

ThreadCounters& this_thread_counters() noexcept;

/// Test hook: when `one_in` > 0, tree operations yield the processor at
/// their synchronization points with probability 1/one_in. This forces
/// interleavings on machines with few cores. Zero disables it.
void set_yield_injection(unsigned one_in) noexcept;
unsigned yield_injection() noexcept;

namespace detail {

extern std::atomic<unsigned> g_yield_one_in;
void injected_yield() noexcept;

inline void yield_point() noexcept {
  if (g_yield_one_in.load(std::memory_order_relaxed) != 0) injected_yield();
}

inline void cpu_relax() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_ia32_pause();
#elif defined(__aarch64__)
  asm volatile("yield" ::: "memory");
#endif
}

/// Spin briefly, then give the processor away. Lock holders may be
/// descheduled, so pure spinning can burn a whole time slice.
class Backoff {
 public:
  void pause() noexcept {
    if (spins_ < kSpinLimit) {
      for (unsigned i = 0; i < (1u << spins_); ++i) cpu_relax();
      ++spins_;
    } else {
      std::this_thread::yield();
    }
  }

 private:
  static constexpr unsigned kSpinLimit = 4;
  unsigned spins_ = 0;
};

}  // namespace detail
}  // namespace cbst
