#include "cbst/stress.hpp"

#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

#include "cbst/bench.hpp"

namespace cbst {

DeadlockSuspectedError::DeadlockSuspectedError(std::uint32_t thread_id, const Event& last_invoke,
                                               std::string message)
    : std::runtime_error(std::move(message)), thread_id_(thread_id), last_invoke_(last_invoke) {}

namespace {

struct Worker {
  std::vector<Event> events;
  std::uint64_t completed = 0;
  std::exception_ptr error;
  // Published before every operation so a stuck thread can be named.
  std::atomic<std::uint32_t> last_seq{0};
  std::atomic<std::uint8_t> last_op{0};
  std::atomic<Key> last_key{0};
  std::atomic<std::int64_t> last_invoke_ns{0};
  std::atomic<bool> started_op{false};
  std::atomic<bool> done{false};
};

struct SharedRun {
  std::unique_ptr<ConcurrentSet> tree;
  std::unique_ptr<Worker[]> workers;
  std::atomic<bool> go{false};
  std::mutex mutex;
  std::condition_variable finished_cv;
  unsigned finished = 0;
};

void work(SharedRun& run, const StressConfig& config, std::uint32_t id,
          std::chrono::steady_clock::time_point* deadline) {
  Worker& self = run.workers[id];
  try {
    OpGenerator generator(config.workload, config.seed, id);
    const bool timed = config.ops_per_thread == 0;
    if (!timed) {
      self.events.reserve(config.record == RecordMode::kAll ? 2 * config.ops_per_thread : 1024);
    } else {
      self.events.reserve(1 << 16);
    }
    while (!run.go.load(std::memory_order_acquire)) std::this_thread::yield();

    for (std::uint32_t seq = 0;; ++seq) {
      if (!timed && seq >= config.ops_per_thread) break;
      if (timed && seq % 32 == 0 && std::chrono::steady_clock::now() >= *deadline) break;
      auto draw = generator.next();
      self.last_seq.store(seq, std::memory_order_relaxed);
      self.last_op.store(static_cast<std::uint8_t>(draw.op), std::memory_order_relaxed);
      self.last_key.store(draw.key, std::memory_order_relaxed);
      std::int64_t invoked = monotonic_now_ns();
      self.last_invoke_ns.store(invoked, std::memory_order_relaxed);
      self.started_op.store(true, std::memory_order_release);
      bool result = run.tree->apply(draw.op, draw.key);
      std::int64_t responded = monotonic_now_ns();
      ++self.completed;
      if (config.record == RecordMode::kAll ||
          (result && draw.op != OpKind::kSearch)) {
        self.events.push_back({id, seq, EventKind::kInvoke, draw.op, draw.key, std::nullopt, invoked});
        self.events.push_back({id, seq, EventKind::kRespond, draw.op, draw.key, result, responded});
      }
    }
  } catch (...) {
    self.error = std::current_exception();
  }
  self.done.store(true, std::memory_order_release);
  {
    std::lock_guard lock(run.mutex);
    ++run.finished;
  }
  run.finished_cv.notify_all();
}

}  // namespace

StressResult run_stress(const StressConfig& config) {
  if (config.threads == 0) throw std::invalid_argument("stress run needs at least one thread");
  if (config.ops_per_thread == 0 && config.duration.count() <= 0) {
    throw std::invalid_argument("stress run needs an operation count or a positive duration");
  }
  if (config.variant == Variant::kSeq && config.threads > 1) {
    throw std::invalid_argument("the seq variant is single-threaded");
  }
  config.workload.require_valid();

  auto run = std::make_shared<SharedRun>();
  run->tree = make_tree(config.variant);
  run->workers = std::make_unique<Worker[]>(config.threads);

  StressResult result;
  if (config.prefill) {
    prefill(*run->tree, config.workload, config.seed);
    result.initial_keys = run->tree->collect_leaf_keys();
  }

  // Owned by the shared state so detached workers never outlive it.
  auto deadline = std::make_shared<std::chrono::steady_clock::time_point>();
  std::vector<std::thread> threads;
  threads.reserve(config.threads);
  for (std::uint32_t id = 0; id < config.threads; ++id) {
    threads.emplace_back([run, deadline, config, id] { work(*run, config, id, deadline.get()); });
  }

  auto start = std::chrono::steady_clock::now();
  *deadline = start + config.duration;
  auto give_up = (config.ops_per_thread == 0 ? *deadline : start) + config.timeout;
  run->go.store(true, std::memory_order_release);

  bool all_done;
  {
    std::unique_lock lock(run->mutex);
    // Short system_clock slices against a steady deadline: immune to wall
    // clock jumps, and avoids pthread_cond_clockwait, which some sanitizer
    // runtimes do not intercept.
    while (run->finished != config.threads && std::chrono::steady_clock::now() < give_up) {
      run->finished_cv.wait_until(lock, std::chrono::system_clock::now() +
                                            std::chrono::milliseconds(20));
    }
    all_done = run->finished == config.threads;
  }
  if (!all_done) {
    for (std::uint32_t id = 0; id < config.threads; ++id) {
      Worker& w = run->workers[id];
      if (w.done.load(std::memory_order_acquire)) continue;
      Event last;
      last.thread_id = id;
      last.seq = w.last_seq.load(std::memory_order_relaxed);
      last.kind = EventKind::kInvoke;
      last.op = static_cast<OpKind>(w.last_op.load(std::memory_order_relaxed));
      last.key = w.last_key.load(std::memory_order_relaxed);
      last.timestamp_ns = w.last_invoke_ns.load(std::memory_order_relaxed);
      std::string message = "deadlock suspected: thread " + std::to_string(id) +
                            " still running after the timeout";
      if (w.started_op.load(std::memory_order_acquire)) message += "; last invoke: " + format_event(last);
      for (auto& t : threads) t.detach();
      throw DeadlockSuspectedError(id, last, message);
    }
  }
  for (auto& t : threads) t.join();

  std::vector<Event> events;
  std::size_t total = 0;
  for (std::uint32_t id = 0; id < config.threads; ++id) total += run->workers[id].events.size();
  events.reserve(total);
  for (std::uint32_t id = 0; id < config.threads; ++id) {
    Worker& w = run->workers[id];
    if (w.error) std::rethrow_exception(w.error);
    result.ops_completed += w.completed;
    events.insert(events.end(), w.events.begin(), w.events.end());
    std::vector<Event>().swap(w.events);
  }
  result.history = History(std::move(events));
  result.tree = std::move(run->tree);
  return result;
}

}  // namespace cbst
