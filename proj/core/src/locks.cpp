#include "cbst/locks.hpp"

namespace cbst {

namespace {
std::atomic<bool> g_verify_locks{true};
}  // namespace

void set_lock_verification(bool enabled) noexcept {
  g_verify_locks.store(enabled, std::memory_order_relaxed);
}

bool lock_verification_enabled() noexcept {
  return g_verify_locks.load(std::memory_order_relaxed);
}

namespace detail {

void report_lock_misuse(const char* what) {
  if (lock_verification_enabled()) throw LockDisciplineError(what);
}

}  // namespace detail
}  // namespace cbst
