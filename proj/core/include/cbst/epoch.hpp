#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <vector>

namespace cbst {

/// Epoch-based deferred reclamation for nodes unlinked while optimistic
/// readers may still hold pointers to them.
///
/// Every operation runs inside a Guard. A retired pointer is freed only once
/// the global epoch has advanced twice past its retirement epoch, which
/// cannot happen while any guard pinned before the retirement is alive.
/// Guards occupy one of kSlots announcement slots; the slot also owns the
/// limbo list its holders retire into.
class EpochDomain {
 public:
  using Deleter = void (*)(void*);
  static constexpr unsigned kSlots = 256;

  explicit EpochDomain(Deleter deleter) noexcept : deleter_(deleter) {}
  EpochDomain(const EpochDomain&) = delete;
  EpochDomain& operator=(const EpochDomain&) = delete;
  /// Frees everything still in limbo. No guard may be alive.
  ~EpochDomain();

  class Guard {
   public:
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;
    ~Guard();

    /// Hands `ptr` to the domain. It must already be unreachable for
    /// operations that start after this call.
    void retire(void* ptr);

   private:
    friend class EpochDomain;
    Guard(EpochDomain& domain, unsigned slot) noexcept : domain_(domain), slot_(slot) {}
    EpochDomain& domain_;
    unsigned slot_;
  };

  [[nodiscard]] Guard pin();

  /// Retired pointers not yet freed.
  std::size_t pending() const noexcept;
  std::uint64_t epoch() const noexcept { return global_.load(std::memory_order_acquire); }
  /// Frees all limbo immediately. Caller guarantees no guard is alive.
  void reclaim_quiescent();

 private:
  static constexpr std::uint64_t kIdle = ~std::uint64_t{0};
  static constexpr std::size_t kScanEvery = 128;

  struct Retired {
    std::uint64_t epoch;
    void* ptr;
  };

  struct alignas(64) Slot {
    std::atomic<bool> owned{false};
    std::atomic<std::uint64_t> announced{kIdle};
    std::vector<Retired> limbo;
    std::size_t since_scan = 0;
  };

  bool try_advance() noexcept;
  void collect(Slot& slot);

  Deleter deleter_;
  alignas(64) std::atomic<std::uint64_t> global_{0};
  std::atomic<std::size_t> pending_{0};
  std::array<Slot, kSlots> slots_{};
};

}  // namespace cbst
