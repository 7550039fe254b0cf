#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cbst/tree.hpp"
#include "cbst/workload.hpp"

namespace cbst {

/// Which counter feeds BenchRecord::retries and the contention estimate.
enum class ContentionMetric : std::uint8_t {
  kRetries,      // one per restart of an operation's outer loop
  kFailedLocks,  // one per failed try-acquire
};

struct BenchConfig {
  Variant variant = Variant::kFEM;
  unsigned threads = 1;
  std::chrono::milliseconds duration{1000};
  WorkloadSpec workload = WorkloadSpec::low_contention(10000);
  std::uint64_t seed = 1;
  std::chrono::milliseconds warmup{500};
  ContentionMetric metric = ContentionMetric::kRetries;
  /// Round-robin affinity for worker threads where the platform allows it.
  bool pin_threads = false;
  /// Run check_structure after the timed phase; a failure throws BenchError.
  bool verify_structure = false;

  std::vector<std::string> validate() const;
};

struct BenchRecord {
  Variant variant = Variant::kFEM;
  unsigned threads = 1;
  Key key_range = 0;
  unsigned insert_pct = 0;
  unsigned delete_pct = 0;
  unsigned search_pct = 0;
  std::int64_t duration_ms = 0;
  std::uint64_t ops_completed = 0;
  double throughput_ops_s = 0.0;
  std::uint64_t retries = 0;
  double contention_rate = 0.0;
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;
  unsigned repeat = 0;

  WorkloadSpec workload() const { return {insert_pct, delete_pct, search_pct, key_range}; }
  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// retries / (retries + completed), 0 when both are 0.
double contention_rate(std::uint64_t retries, std::uint64_t completed) noexcept;

/// Inserts uniform keys from [0, key_range) until the set holds
/// key_range / 2 keys. Returns the number of insert attempts. Expects an
/// empty tree.
std::uint64_t prefill(ConcurrentSet& tree, const WorkloadSpec& workload, std::uint64_t seed);

/// Prefill, untimed warmup, then `threads` workers run the mix until the
/// deadline. Throws BenchError for invalid configurations (including SEQ
/// with more than one thread).
BenchRecord run_bench(const BenchConfig& config, unsigned repeat = 0);

/// Every (variant, threads) pair, `repeats` times each, in
/// variant-major order. SEQ is only run at one thread; its other thread
/// counts are skipped. `on_record` sees each record as it completes.
std::vector<BenchRecord> sweep(const BenchConfig& base, std::span<const unsigned> thread_counts,
                               std::span<const Variant> variants, unsigned repeats = 3,
                               const std::function<void(const BenchRecord&)>& on_record = {});

}  // namespace cbst
