#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>

namespace cbst {

/// Raised when a lock is used outside its discipline (release while unheld,
/// mark without holding the flag) and lock verification is enabled.
class LockDisciplineError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Lock verification is on by default. The check only runs on the misuse
/// path, so leaving it enabled costs nothing on correct code.
void set_lock_verification(bool enabled) noexcept;
bool lock_verification_enabled() noexcept;

namespace detail {
void report_lock_misuse(const char* what);
}  // namespace detail

/// Single ownership flag. All acquires are try-acquires; callers retry.
class FlagLock {
 public:
  FlagLock() = default;
  FlagLock(const FlagLock&) = delete;
  FlagLock& operator=(const FlagLock&) = delete;

  bool try_acquire() noexcept {
    if (flag_.load(std::memory_order_relaxed)) return false;
    bool expected = false;
    return flag_.compare_exchange_strong(expected, true, std::memory_order_seq_cst);
  }

  void release() {
    if (!flag_.exchange(false, std::memory_order_seq_cst)) {
      detail::report_lock_misuse("FlagLock released while not held");
    }
  }

  bool is_locked() const noexcept { return flag_.load(std::memory_order_seq_cst); }

 private:
  std::atomic<bool> flag_{false};
};

/// Ownership flag and logical-deletion mark packed into one atomic byte.
///
/// The mark only changes while the flag is held. A word released with the
/// mark set belongs to a retired node and is never marked false again.
class FlagMarkWord {
 public:
  FlagMarkWord() = default;
  FlagMarkWord(const FlagMarkWord&) = delete;
  FlagMarkWord& operator=(const FlagMarkWord&) = delete;

  bool try_acquire() noexcept {
    std::uint8_t word = bits_.load(std::memory_order_relaxed);
    while ((word & kFlag) == 0) {
      if (bits_.compare_exchange_weak(word, word | kFlag, std::memory_order_seq_cst,
                                      std::memory_order_relaxed)) {
        return true;
      }
    }
    return false;
  }

  /// Clears the flag and leaves the mark untouched.
  void release() {
    std::uint8_t prev = bits_.fetch_and(static_cast<std::uint8_t>(~kFlag),
                                        std::memory_order_seq_cst);
    if ((prev & kFlag) == 0) {
      detail::report_lock_misuse("FlagMarkWord released while not held");
    }
  }

  void set_marked(bool marked) {
    if (lock_verification_enabled() && !is_locked()) {
      detail::report_lock_misuse("FlagMarkWord mark changed without holding the flag");
    }
    if (marked) {
      bits_.fetch_or(kMark, std::memory_order_seq_cst);
    } else {
      bits_.fetch_and(static_cast<std::uint8_t>(~kMark), std::memory_order_seq_cst);
    }
  }

  bool is_locked() const noexcept {
    return (bits_.load(std::memory_order_seq_cst) & kFlag) != 0;
  }
  bool is_marked() const noexcept {
    return (bits_.load(std::memory_order_seq_cst) & kMark) != 0;
  }

 private:
  static constexpr std::uint8_t kFlag = 0x1;
  static constexpr std::uint8_t kMark = 0x2;
  std::atomic<std::uint8_t> bits_{0};
};

/// Ticket/version pair. Held iff ticket != version; every release bumps the
/// version, so an unchanged version proves no writer held the lock since.
class TicketLock {
 public:
  TicketLock() = default;
  TicketLock(const TicketLock&) = delete;
  TicketLock& operator=(const TicketLock&) = delete;

  bool try_acquire() noexcept {
    std::uint64_t version = version_.load(std::memory_order_seq_cst);
    std::uint64_t ticket = ticket_.load(std::memory_order_seq_cst);
    if (ticket != version) return false;
    return ticket_.compare_exchange_strong(ticket, ticket + 1, std::memory_order_seq_cst);
  }

  void release() {
    std::uint64_t version = version_.load(std::memory_order_relaxed);
    if (ticket_.load(std::memory_order_relaxed) == version) {
      detail::report_lock_misuse("TicketLock released while not held");
      return;
    }
    version_.store(version + 1, std::memory_order_seq_cst);
  }

  std::uint64_t version_of() const noexcept { return version_.load(std::memory_order_seq_cst); }
  std::uint64_t ticket() const noexcept { return ticket_.load(std::memory_order_seq_cst); }

  bool is_locked() const noexcept {
    std::uint64_t version = version_.load(std::memory_order_seq_cst);
    return ticket_.load(std::memory_order_seq_cst) != version;
  }

 private:
  std::atomic<std::uint64_t> ticket_{0};
  std::atomic<std::uint64_t> version_{0};
};

}  // namespace cbst
