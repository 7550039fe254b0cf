#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbst/bench.hpp"

namespace cbst {

class ModelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inputs to the concurrent speedup model. Work quantities share one
/// abstract unit; only their ratios to w_parallel enter the speedup.
struct ModelParams {
  unsigned processors = 1;   // P
  double contention = 0.0;   // c: share of attempted work lost to retries
  double alpha = 1.0;        // rate of taking effect on linearization points
  double beta = 1.0;         // rate of recording valid linearization points
  double w_parallel = 1.0;   // w_p
  double w_snapshot = 0.0;   // cost of the optimistic descent
  double w_control = 0.0;    // cost of post-lock validation
  double hardness = 2.0;     // h > 1, only used by alpha_at
  double w_sequential = 0.0; // w_s; concurrent structures are taken as fully parallel
};

/// Classic form 1 / ((1 - p) + p / P). Throws ModelError outside
/// 0 <= p <= 1, P >= 1.
double amdahl_speedup(double parallel_fraction, unsigned processors);

/// w_p + w_snapshot + w_control.
double parallel_workload(const ModelParams& params) noexcept;

/// P (1 - c) alpha.
double effective_parallelism(const ModelParams& params) noexcept;

/// P (1 - c) alpha / (1 + w_snapshot / w_p + w_control / w_p).
///
/// Checks only the quantities the formula uses (P >= 1, c and alpha in
/// [0, 1], w_p > 0, overheads >= 0) and throws ModelError naming the first
/// violated inequality. validate() covers the full constraint block.
double concurrent_speedup(const ModelParams& params);

/// Upper bound on alpha: w_snapshot beta / w_control.
double alpha_ceiling(const ModelParams& params);

/// alpha(t) = alpha_ceiling (1 - h^-t). Throws ModelError for h <= 1,
/// w_control <= 0 or t < 0.
double alpha_at(double t, const ModelParams& params);

/// One message per violated constraint, empty when all hold:
///   P >= 1;  0 <= c <= 1;  w_p > 0;  w_snapshot, w_control >= 0;  h > 1;
///   1 / w_snapshot <= beta <= 1  (lower bound only when w_snapshot > 0);
///   0 <= alpha <= 1;  alpha <= w_snapshot beta / w_control  (when w_control > 0).
std::vector<std::string> validate(const ModelParams& params);

/// Mean contention rate per (variant, threads, workload).
struct ContentionEstimate {
  Variant variant = Variant::kFEM;
  unsigned threads = 1;
  WorkloadSpec workload;
  double contention = 0.0;
  std::size_t samples = 0;
};

/// c = retries / (retries + ops_completed) per record, averaged over the
/// repeats of each configuration. Throws ModelError on an empty input.
std::vector<ContentionEstimate> fit_contention(const std::vector<BenchRecord>& records);

struct ComparisonRow {
  Variant variant = Variant::kFEM;
  unsigned threads = 1;
  WorkloadSpec workload;
  double measured_speedup = 0.0;
  double predicted_speedup = 0.0;
  double ratio = 0.0;  // measured / predicted
  double c_fitted = 0.0;
};

/// Measured speedup is mean throughput at T threads over mean throughput
/// at one thread for the same variant and workload. Predicted speedup is
/// concurrent_speedup with P = T, the fitted c, and alpha, beta and the
/// work ratios taken from `tmpl`. Throws ModelError when a configuration
/// has no one-thread baseline.
std::vector<ComparisonRow> predict_vs_measured(const std::vector<BenchRecord>& records,
                                               const ModelParams& tmpl);

inline constexpr std::string_view kComparisonCsvHeader =
    "variant,threads,measured_speedup,predicted_speedup,ratio,c_fitted";

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace cbst
