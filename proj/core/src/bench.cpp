#include "cbst/bench.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "cbst/contention.hpp"
#include "cbst/structure.hpp"

#if defined(__linux__)
#include <pthread.h>
#include <sched.h>
#endif

namespace cbst {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kPrefillStream = 0xfeedULL << 32;
constexpr unsigned kClockEvery = 64;

void pin_to_cpu(unsigned index) {
#if defined(__linux__)
  cpu_set_t allowed;
  CPU_ZERO(&allowed);
  if (sched_getaffinity(0, sizeof(allowed), &allowed) != 0) return;
  int count = CPU_COUNT(&allowed);
  if (count <= 0) return;
  int target = static_cast<int>(index % static_cast<unsigned>(count));
  for (int cpu = 0; cpu < CPU_SETSIZE; ++cpu) {
    if (!CPU_ISSET(cpu, &allowed)) continue;
    if (target-- == 0) {
      cpu_set_t one;
      CPU_ZERO(&one);
      CPU_SET(cpu, &one);
      pthread_setaffinity_np(pthread_self(), sizeof(one), &one);
      return;
    }
  }
#else
  (void)index;
#endif
}

struct WorkerTally {
  std::uint64_t ops = 0;
  std::uint64_t contention = 0;
  Clock::time_point stopped;
};

std::uint64_t contention_counter(ContentionMetric metric) {
  const ThreadCounters& c = this_thread_counters();
  return metric == ContentionMetric::kRetries ? c.retries : c.failed_locks;
}

}  // namespace

std::vector<std::string> BenchConfig::validate() const {
  std::vector<std::string> problems = workload.validate();
  if (threads == 0) problems.push_back("threads must be positive");
  if (duration.count() <= 0) problems.push_back("duration must be positive");
  if (warmup.count() < 0) problems.push_back("warmup must not be negative");
  if (variant == Variant::kSeq && threads > 1) {
    problems.push_back("the seq variant is single-threaded (got " + std::to_string(threads) +
                       " threads)");
  }
  return problems;
}

double contention_rate(std::uint64_t retries, std::uint64_t completed) noexcept {
  std::uint64_t total = retries + completed;
  return total == 0 ? 0.0 : static_cast<double>(retries) / static_cast<double>(total);
}

std::uint64_t prefill(ConcurrentSet& tree, const WorkloadSpec& workload, std::uint64_t seed) {
  workload.require_valid();
  OpGenerator keys(workload, seed, kPrefillStream);
  const auto target = static_cast<std::uint64_t>(workload.key_range / 2);
  std::uint64_t size = 0;
  std::uint64_t attempts = 0;
  while (size < target) {
    ++attempts;
    if (tree.insert(keys.next_key())) ++size;
  }
  return attempts;
}

BenchRecord run_bench(const BenchConfig& config, unsigned repeat) {
  if (auto problems = config.validate(); !problems.empty()) {
    std::string message = "invalid bench configuration:";
    for (const auto& p : problems) message += " " + p + ";";
    throw BenchError(message);
  }

  const std::uint64_t run_seed = derive_stream_seed(config.seed, repeat);
  auto tree = make_tree(config.variant);
  prefill(*tree, config.workload, run_seed);

  std::vector<WorkerTally> tallies(config.threads);
  std::atomic<unsigned> ready{0};
  std::atomic<bool> go{false};
  Clock::time_point measure_start;
  Clock::time_point measure_end;

  auto worker = [&](unsigned id) {
    if (config.pin_threads) pin_to_cpu(id);
    OpGenerator generator(config.workload, run_seed, id);
    ready.fetch_add(1, std::memory_order_acq_rel);
    while (!go.load(std::memory_order_acquire)) std::this_thread::yield();

    // Warmup: same loop, nothing counted.
    for (unsigned n = 0;; ++n) {
      if (n % kClockEvery == 0 && Clock::now() >= measure_start) break;
      auto d = generator.next();
      tree->apply(d.op, d.key);
    }
    const std::uint64_t contention_before = contention_counter(config.metric);
    std::uint64_t ops = 0;
    Clock::time_point now;
    for (;;) {
      if (ops % kClockEvery == 0 && (now = Clock::now()) >= measure_end) break;
      auto d = generator.next();
      tree->apply(d.op, d.key);
      ++ops;
    }
    tallies[id] = {ops, contention_counter(config.metric) - contention_before, now};
  };

  std::vector<std::thread> threads;
  threads.reserve(config.threads);
  for (unsigned id = 0; id < config.threads; ++id) threads.emplace_back(worker, id);
  while (ready.load(std::memory_order_acquire) != config.threads) std::this_thread::yield();
  measure_start = Clock::now() + config.warmup;
  measure_end = measure_start + config.duration;
  go.store(true, std::memory_order_release);
  for (auto& t : threads) t.join();

  if (config.verify_structure) {
    InvariantReport report = check_structure(*tree);
    if (!report.ok()) {
      throw BenchError("structure check failed after " + std::string(to_string(config.variant)) +
                       " run: " + report.violations.front());
    }
  }

  BenchRecord record;
  record.variant = config.variant;
  record.threads = config.threads;
  record.key_range = config.workload.key_range;
  record.insert_pct = config.workload.insert_pct;
  record.delete_pct = config.workload.delete_pct;
  record.search_pct = config.workload.search_pct;
  record.duration_ms = config.duration.count();
  record.seed = config.seed;
  record.repeat = repeat;
  Clock::time_point last_stop = measure_start;
  for (const WorkerTally& t : tallies) {
    record.ops_completed += t.ops;
    record.retries += t.contention;
    last_stop = std::max(last_stop, t.stopped);
  }
  record.wall_time_ms =
      std::chrono::duration<double, std::milli>(last_stop - measure_start).count();
  record.throughput_ops_s =
      record.wall_time_ms > 0 ? static_cast<double>(record.ops_completed) / (record.wall_time_ms / 1000.0)
                              : 0.0;
  record.contention_rate = contention_rate(record.retries, record.ops_completed);
  return record;
}

std::vector<BenchRecord> sweep(const BenchConfig& base, std::span<const unsigned> thread_counts,
                               std::span<const Variant> variants, unsigned repeats,
                               const std::function<void(const BenchRecord&)>& on_record) {
  if (thread_counts.empty()) throw BenchError("sweep needs at least one thread count");
  if (variants.empty()) throw BenchError("sweep needs at least one variant");
  if (repeats == 0) throw BenchError("sweep needs at least one repeat");

  std::vector<BenchRecord> records;
  for (Variant variant : variants) {
    for (unsigned threads : thread_counts) {
      if (variant == Variant::kSeq && threads > 1) continue;
      BenchConfig config = base;
      config.variant = variant;
      config.threads = threads;
      for (unsigned r = 0; r < repeats; ++r) {
        records.push_back(run_bench(config, r));
        if (on_record) on_record(records.back());
      }
    }
  }
  return records;
}

}  // namespace cbst
