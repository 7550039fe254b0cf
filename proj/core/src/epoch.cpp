#include "cbst/epoch.hpp"

#include <functional>
#include <thread>

namespace cbst {

EpochDomain::~EpochDomain() { reclaim_quiescent(); }

EpochDomain::Guard EpochDomain::pin() {
  thread_local unsigned hint =
      static_cast<unsigned>(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  for (unsigned attempt = 0;; ++attempt) {
    unsigned index = (hint + attempt) % kSlots;
    Slot& slot = slots_[index];
    bool expected = false;
    if (!slot.owned.load(std::memory_order_relaxed) &&
        slot.owned.compare_exchange_strong(expected, true, std::memory_order_acquire)) {
      hint = index;
      slot.announced.store(global_.load(std::memory_order_seq_cst), std::memory_order_seq_cst);
      std::atomic_thread_fence(std::memory_order_seq_cst);
      return Guard(*this, index);
    }
    if (attempt != 0 && attempt % kSlots == 0) std::this_thread::yield();
  }
}

EpochDomain::Guard::~Guard() {
  Slot& slot = domain_.slots_[slot_];
  slot.announced.store(kIdle, std::memory_order_release);
  slot.owned.store(false, std::memory_order_release);
}

void EpochDomain::Guard::retire(void* ptr) {
  Slot& slot = domain_.slots_[slot_];
  slot.limbo.push_back({domain_.global_.load(std::memory_order_seq_cst), ptr});
  domain_.pending_.fetch_add(1, std::memory_order_relaxed);
#ifdef CBST_RETAIN_RETIRED
  return;  // freed by ~EpochDomain
#endif
  if (++slot.since_scan >= kScanEvery) {
    slot.since_scan = 0;
    domain_.try_advance();
    domain_.collect(slot);
  }
}

bool EpochDomain::try_advance() noexcept {
  std::uint64_t current = global_.load(std::memory_order_seq_cst);
  for (const Slot& slot : slots_) {
    std::uint64_t seen = slot.announced.load(std::memory_order_seq_cst);
    if (seen != kIdle && seen != current) return false;
  }
  return global_.compare_exchange_strong(current, current + 1, std::memory_order_seq_cst);
}

void EpochDomain::collect(Slot& slot) {
  std::uint64_t current = global_.load(std::memory_order_acquire);
  std::size_t freed = 0;
  while (freed < slot.limbo.size() && slot.limbo[freed].epoch + 2 <= current) {
    deleter_(slot.limbo[freed].ptr);
    ++freed;
  }
  if (freed != 0) {
    slot.limbo.erase(slot.limbo.begin(), slot.limbo.begin() + static_cast<std::ptrdiff_t>(freed));
    pending_.fetch_sub(freed, std::memory_order_relaxed);
  }
}

std::size_t EpochDomain::pending() const noexcept {
  return pending_.load(std::memory_order_relaxed);
}

void EpochDomain::reclaim_quiescent() {
  for (Slot& slot : slots_) {
    for (const Retired& r : slot.limbo) deleter_(r.ptr);
    pending_.fetch_sub(slot.limbo.size(), std::memory_order_relaxed);
    slot.limbo.clear();
    slot.since_scan = 0;
  }
}

}  // namespace cbst
