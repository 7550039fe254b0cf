#include "cbst/contention.hpp"

#include <random>

namespace cbst {

ThreadCounters& this_thread_counters() noexcept {
  thread_local ThreadCounters counters;
  return counters;
}

void set_yield_injection(unsigned one_in) noexcept {
  detail::g_yield_one_in.store(one_in, std::memory_order_relaxed);
}

unsigned yield_injection() noexcept {
  return detail::g_yield_one_in.load(std::memory_order_relaxed);
}

namespace detail {

std::atomic<unsigned> g_yield_one_in{0};

void injected_yield() noexcept {
  thread_local std::minstd_rand rng{
      static_cast<std::uint_fast32_t>(std::hash<std::thread::id>{}(std::this_thread::get_id()))};
  unsigned one_in = g_yield_one_in.load(std::memory_order_relaxed);
  if (one_in != 0 && rng() % one_in == 0) std::this_thread::yield();
}

}  // namespace detail
}  // namespace cbst
