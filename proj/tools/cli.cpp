#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "cbst/bench.hpp"
#include "cbst/contention.hpp"
#include "cbst/linearizability.hpp"
#include "cbst/model.hpp"
#include "cbst/records.hpp"
#include "cbst/structure.hpp"
#include "cbst/stress.hpp"

namespace cbst::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Preset {
  std::vector<unsigned> threads;
  std::vector<Key> key_ranges;
  WorkloadSpec mix;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"paper-low", {{1, 2, 4, 8, 16, 32}, {10000, 100000}, WorkloadSpec::low_contention(0)}},
      {"paper-mid", {{1, 2, 4, 8, 16, 32}, {10000, 100000}, WorkloadSpec::mid_contention(0)}},
  };
  return table;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, preset] : presets()) names.push_back(name);
  return names;
}

std::vector<std::string> variant_names() {
  std::vector<std::string> names;
  for (Variant v : kAllVariants) names.emplace_back(to_string(v));
  return names;
}

Variant variant_from(const std::string& name) {
  auto v = parse_variant(name);
  if (!v) throw UsageError("unknown variant '" + name + "'");
  return *v;
}

WorkloadSpec mix_from(const std::string& text, Key key_range) {
  try {
    return parse_mix(text, key_range);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Writes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

bool env_flag(const char* name) {
  const char* value = std::getenv(name);
  return value != nullptr && std::string(value) == "1";
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::string> variants;
  std::vector<unsigned> threads{1};
  std::int64_t duration_ms = 1000;
  std::vector<Key> key_ranges{10000};
  std::string mix = "9,1,90";
  std::uint64_t seed = 1;
  unsigned repeats = 3;
  std::int64_t warmup_ms = 500;
  std::string format = "csv";
  std::string out;
  std::string preset;
  std::string metric = "retries";
  bool verify = false;
};

void print_summary(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << std::left << std::setw(10) << "variant" << std::right << std::setw(8) << "threads"
     << std::setw(10) << "keys" << std::setw(11) << "mix" << std::setw(8) << "rep"
     << std::setw(14) << "ops/s" << std::setw(12) << "c" << '\n';
  for (const BenchRecord& r : records) {
    os << std::left << std::setw(10) << display_name(r.variant) << std::right << std::setw(8)
       << r.threads << std::setw(10) << r.key_range << std::setw(11) << format_mix(r.workload())
       << std::setw(8) << r.repeat << std::setw(14) << std::fixed << std::setprecision(0)
       << r.throughput_ops_s << std::setw(12) << std::setprecision(6) << r.contention_rate
       << std::defaultfloat << '\n';
  }
}

int cmd_bench(const BenchArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  const bool explicit_variant = sub.count("--variant") > 0;
  std::vector<unsigned> threads = a.threads;
  std::vector<Key> key_ranges = a.key_ranges;
  std::string mix_text = a.mix;
  std::vector<Variant> variants;

  if (!a.preset.empty()) {
    const Preset& p = presets().at(a.preset);
    if (sub.count("--threads") == 0) threads = p.threads;
    if (sub.count("--key-range") == 0) key_ranges = p.key_ranges;
    if (sub.count("--mix") == 0) mix_text = format_mix(p.mix);
    if (!explicit_variant) variants.assign(std::begin(kAllVariants), std::end(kAllVariants));
  }
  if (explicit_variant) {
    for (const auto& name : a.variants) variants.push_back(variant_from(name));
  } else if (variants.empty()) {
    variants = {Variant::kFEM};
  }
  if (threads.empty() || key_ranges.empty()) throw UsageError("empty --threads or --key-range");
  for (unsigned t : threads) {
    if (t == 0) throw UsageError("--threads entries must be positive");
  }
  if (explicit_variant) {
    for (Variant v : variants) {
      for (unsigned t : threads) {
        if (v == Variant::kSeq && t > 1) {
          throw UsageError("the seq variant is single-threaded; got --threads " +
                           std::to_string(t));
        }
      }
    }
  }
  if (a.duration_ms <= 0) throw UsageError("--duration-ms must be positive");
  if (a.warmup_ms < 0) throw UsageError("--warmup-ms must not be negative");
  if (a.repeats == 0) throw UsageError("--repeats must be positive");

  std::vector<std::pair<BenchConfig, std::vector<Variant>>> plan;
  for (Key range : key_ranges) {
    BenchConfig base;
    base.duration = std::chrono::milliseconds(a.duration_ms);
    base.warmup = std::chrono::milliseconds(a.warmup_ms);
    base.workload = mix_from(mix_text, range);
    base.seed = a.seed;
    base.metric = a.metric == "failed-locks" ? ContentionMetric::kFailedLocks
                                             : ContentionMetric::kRetries;
    base.pin_threads = env_flag("CBST_PIN");
    base.verify_structure = a.verify;
    plan.emplace_back(base, variants);
  }

  Sink sink(a.out, out);
  std::ostream& progress = sink.to_file() ? out : err;
  std::vector<BenchRecord> records;
  for (const auto& [base, vs] : plan) {
    auto batch = sweep(base, threads, vs, a.repeats, [&](const BenchRecord& r) {
      progress << "  " << display_name(r.variant) << " threads=" << r.threads
               << " keys=" << r.key_range << " repeat=" << r.repeat << ": " << std::fixed
               << std::setprecision(0) << r.throughput_ops_s << std::defaultfloat << " ops/s\n";
    });
    records.insert(records.end(), batch.begin(), batch.end());
  }
  if (a.format == "json") {
    write_bench_json(*sink, records);
  } else {
    write_bench_csv(*sink, records);
  }
  print_summary(progress, records);
  return kExitOk;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string mode;
  std::string variant = "fem";
  unsigned threads = 0;
  std::uint64_t ops = 5;
  unsigned iterations = 1000;
  Key key_range = 0;
  std::string mix = "20,10,70";
  std::uint64_t seed = 1;
  std::int64_t duration_ms = 5000;
  std::int64_t timeout_ms = 30000;
  std::string history;
  std::string dump_failing;
  std::size_t max_ops = 20;
  unsigned yield_one_in = 2;
};

void dump(const std::string& path, const History& h, std::ostream& err) {
  if (path.empty()) return;
  std::ofstream file(path);
  write_history(file, h);
  err << "failing history written to " << path << '\n';
}

int check_invariants(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  StressConfig config;
  config.variant = variant_from(a.variant);
  config.threads = a.threads == 0 ? 8 : a.threads;
  config.duration = std::chrono::milliseconds(a.duration_ms);
  config.timeout = std::chrono::milliseconds(a.timeout_ms);
  config.workload = mix_from(a.mix, a.key_range == 0 ? 10000 : a.key_range);
  config.seed = a.seed;
  config.prefill = true;
  config.record = RecordMode::kSuccessfulUpdates;
  if (config.variant == Variant::kSeq && config.threads > 1) {
    throw UsageError("the seq variant is single-threaded");
  }
  if (a.duration_ms <= 0) throw UsageError("--duration-ms must be positive");

  StressResult result;
  try {
    result = run_stress(config);
  } catch (const DeadlockSuspectedError& e) {
    err << "FAIL: " << e.what() << '\n';
    return kExitFailure;
  }
  InvariantReport report = check_structure(*result.tree);
  check_balance(result.history, result.tree->collect_leaf_keys(), result.initial_keys, report);
  out << display_name(config.variant) << ": " << result.ops_completed << " operations on "
      << config.threads << " threads, " << result.tree->collect_leaf_keys().size()
      << " keys at the end, " << result.tree->retry_count() << " retries\n";
  if (!report.ok()) {
    err << "FAIL: " << report.violations.front() << '\n';
    dump(a.dump_failing, result.history, err);
    return kExitFailure;
  }
  out << "structure and balance: ok\n";
  return kExitOk;
}

int check_linearizability(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  StressConfig config;
  config.variant = variant_from(a.variant);
  config.threads = a.threads == 0 ? 3 : a.threads;
  config.ops_per_thread = a.ops;
  config.timeout = std::chrono::milliseconds(a.timeout_ms);
  config.workload = mix_from(a.mix, a.key_range == 0 ? 4 : a.key_range);
  if (config.variant == Variant::kSeq && config.threads > 1) {
    throw UsageError("the seq variant is single-threaded");
  }
  if (a.ops == 0) throw UsageError("--ops must be positive");
  if (config.threads * a.ops > a.max_ops) {
    throw UsageError("threads x ops exceeds the checker bound (--max-ops " +
                     std::to_string(a.max_ops) + ")");
  }

  LinearizabilityOptions options;
  options.max_ops = a.max_ops;
  unsigned previous_yield = yield_injection();
  set_yield_injection(a.yield_one_in);
  int status = kExitOk;
  unsigned passed = 0;
  for (unsigned i = 0; i < a.iterations; ++i) {
    config.seed = derive_stream_seed(a.seed, i);
    StressResult result;
    try {
      result = run_stress(config);
    } catch (const DeadlockSuspectedError& e) {
      err << "FAIL: iteration " << i << ": " << e.what() << '\n';
      status = kExitFailure;
      break;
    }
    if (!check_linearizable(result.history, options)) {
      err << "FAIL: iteration " << i << " (seed " << config.seed
          << ") produced a non-linearizable history\n";
      write_history(err, result.history);
      dump(a.dump_failing, result.history, err);
      status = kExitFailure;
      break;
    }
    ++passed;
  }
  set_yield_injection(previous_yield);
  out << display_name(config.variant) << ": " << passed << "/" << a.iterations
      << " histories linearizable\n";
  return status;
}

int check_replay(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  if (a.history.empty()) throw UsageError("--mode replay needs --history <file>");
  std::ifstream in(a.history);
  if (!in) {
    err << "cannot open history '" << a.history << "'\n";
    return kExitFailure;
  }
  History history;
  try {
    history = read_history(in);
  } catch (const HistoryFormatError& e) {
    err << "malformed history: " << e.what() << '\n';
    return kExitFailure;
  }
  LinearizabilityOptions options;
  options.max_ops = a.max_ops;
  LinearizabilityResult result;
  try {
    result = check_linearizable_detailed(history, options);
  } catch (const HistoryTooLargeError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const HistoryFormatError& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
  if (!result.linearizable) {
    err << "FAIL: history is not linearizable (" << result.states_explored
        << " states explored)\n";
    return kExitFailure;
  }
  auto ops = history.operations();
  out << "linearizable; witness order:\n";
  for (std::size_t index : result.witness) {
    const Operation& op = ops[index];
    out << "  thread " << op.thread_id << " #" << op.seq << ' ' << to_string(op.op) << ' '
        << op.key << " -> " << (op.result ? (*op.result ? "true" : "false") : "pending") << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- model

struct ModelArgs {
  bool eval = false;
  bool curve = false;
  bool compare = false;
  unsigned processors = 1;
  double c = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double ws_ratio = 0.0;
  double wc_ratio = 0.0;
  double wp = 1.0;
  double h = 2.0;
  double asymptote = 0.0;
  double t_max = 10.0;
  double step = 1.0;
  std::string records;
  std::string out;
};

ModelParams params_from(const ModelArgs& a) {
  ModelParams p;
  p.processors = a.processors;
  p.contention = a.c;
  p.alpha = a.alpha;
  p.beta = a.beta;
  p.w_parallel = a.wp;
  p.w_snapshot = a.ws_ratio * a.wp;
  p.w_control = a.wc_ratio * a.wp;
  p.hardness = a.h;
  return p;
}

int report_violations(const std::vector<std::string>& problems, std::ostream& err) {
  for (const auto& p : problems) err << p << '\n';
  return kExitFailure;
}

std::string num(double value) {
  std::ostringstream s;
  s << std::setprecision(12) << value;
  return s.str();
}

int cmd_model(const ModelArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  if (a.eval + a.curve + a.compare != 1) {
    throw UsageError("choose exactly one of --eval, --curve-alpha, --compare");
  }
  ModelParams p = params_from(a);

  if (a.eval) {
    if (auto problems = validate(p); !problems.empty()) return report_violations(problems, err);
    out << num(concurrent_speedup(p)) << '\n';
    return kExitOk;
  }

  if (a.curve) {
    if (!(a.step > 0) || !(a.t_max >= 0)) throw UsageError("--step must be positive, --t-max >= 0");
    ModelParams curve = p;
    if (sub.count("--asymptote") > 0) {
      // The asymptote stands in for w_snapshot beta / w_control.
      if (!(a.asymptote >= 0)) return report_violations({"asymptote must be >= 0"}, err);
      curve.w_snapshot = a.asymptote;
      curve.beta = 1.0;
      curve.w_control = 1.0;
    } else if (auto problems = validate(p); !problems.empty()) {
      return report_violations(problems, err);
    }
    std::vector<std::string> problems;
    if (!(curve.hardness > 1.0)) problems.push_back("h out of range: require h > 1 (got " + num(curve.hardness) + ")");
    if (!(curve.w_control > 0.0)) problems.push_back("w_control out of range: the alpha curve needs w_control > 0");
    if (!problems.empty()) return report_violations(problems, err);

    Sink sink(a.out, out);
    *sink << "t,alpha\n";
    const auto rows = static_cast<long>(std::floor(a.t_max / a.step + 1e-9));
    for (long i = 0; i <= rows; ++i) {
      double t = static_cast<double>(i) * a.step;
      *sink << num(t) << ',' << num(alpha_at(t, curve)) << '\n';
    }
    return kExitOk;
  }

  if (a.records.empty()) throw UsageError("--compare needs --records <file>");
  std::ifstream in(a.records);
  if (!in) {
    err << "cannot open records '" << a.records << "'\n";
    return kExitFailure;
  }
  // P and c come from the records; the remaining constraints still apply.
  ModelParams tmpl = p;
  tmpl.processors = 1;
  tmpl.contention = 0;
  if (auto problems = validate(tmpl); !problems.empty()) return report_violations(problems, err);
  auto rows = predict_vs_measured(read_bench_records(in), tmpl);
  Sink sink(a.out, out);
  write_comparison_csv(*sink, rows);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concurrent external binary search tree: benchmarks, checks and speedup model",
               "cbst"};
  app.require_subcommand(1);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Throughput sweep over variants and threads");
  bench->add_option("--variant", bench_args.variants, "Variant list (seq,coarse,fn,fe,fem,tn)")
      ->delimiter(',')
      ->check(CLI::IsMember(variant_names()));
  bench->add_option("--threads", bench_args.threads, "Thread counts, comma separated")
      ->delimiter(',');
  bench->add_option("--duration-ms", bench_args.duration_ms, "Measured time per run");
  bench->add_option("--key-range", bench_args.key_ranges, "Key ranges, comma separated")
      ->delimiter(',');
  bench->add_option("--mix", bench_args.mix, "insert,delete,search percentages");
  bench->add_option("--seed", bench_args.seed);
  bench->add_option("--repeats", bench_args.repeats, "Runs per configuration");
  bench->add_option("--warmup-ms", bench_args.warmup_ms, "Untimed warmup per run");
  bench->add_option("--format", bench_args.format)->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--out", bench_args.out, "Output file (default stdout)");
  bench->add_option("--preset", bench_args.preset)->check(CLI::IsMember(preset_names()));
  bench->add_option("--metric", bench_args.metric, "Contention counter")
      ->check(CLI::IsMember({"retries", "failed-locks"}));
  bench->add_flag("--verify", bench_args.verify, "Check the tree structure after each run");

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "Invariant, linearizability and replay checks");
  check->add_option("--mode", check_args.mode)
      ->required()
      ->check(CLI::IsMember({"invariants", "linearizability", "replay"}));
  check->add_option("--variant", check_args.variant)->check(CLI::IsMember(variant_names()));
  check->add_option("--threads", check_args.threads);
  check->add_option("--ops", check_args.ops, "Operations per thread (linearizability)");
  check->add_option("--iterations", check_args.iterations);
  check->add_option("--key-range", check_args.key_range);
  check->add_option("--mix", check_args.mix);
  check->add_option("--seed", check_args.seed);
  check->add_option("--duration-ms", check_args.duration_ms, "Stress length (invariants)");
  check->add_option("--timeout-ms", check_args.timeout_ms, "Grace period before a deadlock is declared");
  check->add_option("--history", check_args.history, "History file (replay)");
  check->add_option("--dump-failing", check_args.dump_failing, "Write a failing history here");
  check->add_option("--max-ops", check_args.max_ops, "Checker size bound");
  check->add_option("--yield-one-in", check_args.yield_one_in,
                    "Yield at sync points with probability 1/N (0 disables)");

  ModelArgs model_args;
  CLI::App* model = app.add_subcommand("model", "Concurrent speedup model");
  model->set_help_flag("--help", "Print this help message and exit");
  model->add_flag("--eval", model_args.eval, "Print the predicted speedup");
  model->add_flag("--curve-alpha", model_args.curve, "Emit t,alpha rows as CSV");
  model->add_flag("--compare", model_args.compare, "Compare predictions with bench records");
  model->add_option("--P", model_args.processors, "Processors");
  model->add_option("--c", model_args.c, "Contention rate");
  model->add_option("--alpha", model_args.alpha);
  model->add_option("--beta", model_args.beta);
  model->add_option("--ws-ratio", model_args.ws_ratio, "w_snapshot / w_p");
  model->add_option("--wc-ratio", model_args.wc_ratio, "w_control / w_p");
  model->add_option("--wp", model_args.wp, "Parallel work w_p");
  model->add_option("--h", model_args.h, "Hardness");
  model->add_option("--asymptote", model_args.asymptote);
  model->add_option("--t-max", model_args.t_max);
  model->add_option("--step", model_args.step);
  model->add_option("--records", model_args.records, "Bench CSV or JSON");
  model->add_option("--out", model_args.out);

  std::vector<const char*> argv{"cbst"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bench->parsed()) return cmd_bench(bench_args, *bench, out, err);
    if (check->parsed()) {
      if (check_args.mode == "invariants") return check_invariants(check_args, out, err);
      if (check_args.mode == "linearizability") return check_linearizability(check_args, out, err);
      return check_replay(check_args, out, err);
    }
    return cmd_model(model_args, *model, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace cbst::cli
