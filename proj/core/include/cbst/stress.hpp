#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cbst/history.hpp"
#include "cbst/tree.hpp"
#include "cbst/workload.hpp"

namespace cbst {

enum class RecordMode : std::uint8_t {
  kAll,                // every operation
  kSuccessfulUpdates,  // only inserts and deletes that returned true
};

struct StressConfig {
  Variant variant = Variant::kFEM;
  unsigned threads = 4;
  /// Fixed operation count per thread. When zero, `duration` applies.
  std::uint64_t ops_per_thread = 0;
  std::chrono::milliseconds duration{0};
  WorkloadSpec workload = WorkloadSpec::mid_contention(16);
  std::uint64_t seed = 1;
  /// Grace period beyond the run's own length before a still-running
  /// thread is declared stuck.
  std::chrono::milliseconds timeout{30000};
  /// Fill the tree to half the key range before the threads start.
  bool prefill = false;
  RecordMode record = RecordMode::kAll;
};

struct StressResult {
  History history;
  std::unique_ptr<ConcurrentSet> tree;  // quiescent
  std::vector<Key> initial_keys;         // contents when the workers started
  std::uint64_t ops_completed = 0;
};

/// A worker outlived the timeout. Its threads are abandoned (detached), and
/// the tree is leaked along with them.
class DeadlockSuspectedError : public std::runtime_error {
 public:
  DeadlockSuspectedError(std::uint32_t thread_id, const Event& last_invoke, std::string message);
  std::uint32_t thread_id() const noexcept { return thread_id_; }
  const Event& last_invoke() const noexcept { return last_invoke_; }

 private:
  std::uint32_t thread_id_;
  Event last_invoke_;
};

/// Runs `threads` workers against a fresh tree. Each draws operations from
/// its own seeded generator and logs events into a private buffer; the
/// History is assembled after all workers have joined. A single-threaded
/// fixed-count run is fully reproducible apart from timestamps.
StressResult run_stress(const StressConfig& config);

}  // namespace cbst
