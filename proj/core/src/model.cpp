#include "cbst/model.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace cbst {
namespace {

std::string num(double value) {
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

// Orders configurations deterministically: variant, workload, threads.
using ConfigKey = std::tuple<Variant, Key, unsigned, unsigned, unsigned, unsigned>;

ConfigKey key_of(const BenchRecord& r) {
  return {r.variant, r.key_range, r.insert_pct, r.delete_pct, r.search_pct, r.threads};
}

std::string describe(const BenchRecord& r) {
  return std::string(to_string(r.variant)) + " key_range=" + std::to_string(r.key_range) +
         " mix=" + format_mix(r.workload());
}

}  // namespace

double amdahl_speedup(double parallel_fraction, unsigned processors) {
  if (!(parallel_fraction >= 0.0 && parallel_fraction <= 1.0)) {
    throw ModelError("p out of range: require 0 <= p <= 1 (got " + num(parallel_fraction) + ")");
  }
  if (processors < 1) throw ModelError("P out of range: require P >= 1");
  // Same as 1 / ((1 - p) + p / P), rearranged so p = 1 and P = 1 come out exact.
  const double n = processors;
  return n / (n - parallel_fraction * (n - 1.0));
}

double parallel_workload(const ModelParams& p) noexcept {
  return p.w_parallel + p.w_snapshot + p.w_control;
}

double effective_parallelism(const ModelParams& p) noexcept {
  return static_cast<double>(p.processors) * (1.0 - p.contention) * p.alpha;
}

double concurrent_speedup(const ModelParams& p) {
  if (p.processors < 1) throw ModelError("P out of range: require P >= 1");
  if (!(p.contention >= 0.0 && p.contention <= 1.0)) {
    throw ModelError("c out of range: require 0 <= c <= 1 (got " + num(p.contention) + ")");
  }
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) {
    throw ModelError("alpha out of range: require 0 <= alpha <= 1 (got " + num(p.alpha) + ")");
  }
  if (!(p.w_parallel > 0.0)) {
    throw ModelError("w_p out of range: require w_p > 0 (got " + num(p.w_parallel) + ")");
  }
  if (!(p.w_snapshot >= 0.0) || !(p.w_control >= 0.0)) {
    throw ModelError("overheads out of range: require w_snapshot >= 0 and w_control >= 0");
  }
  return effective_parallelism(p) /
         (1.0 + p.w_snapshot / p.w_parallel + p.w_control / p.w_parallel);
}

double alpha_ceiling(const ModelParams& p) {
  if (!(p.w_control > 0.0)) {
    throw ModelError("w_control out of range: the alpha ceiling needs w_control > 0");
  }
  return p.w_snapshot * p.beta / p.w_control;
}

double alpha_at(double t, const ModelParams& p) {
  if (!(p.hardness > 1.0)) {
    throw ModelError("h out of range: require h > 1 (got " + num(p.hardness) + ")");
  }
  if (!(t >= 0.0)) throw ModelError("t out of range: require t >= 0 (got " + num(t) + ")");
  return alpha_ceiling(p) * (1.0 - std::pow(p.hardness, -t));
}

std::vector<std::string> validate(const ModelParams& p) {
  std::vector<std::string> out;
  if (p.processors < 1) out.push_back("P out of range: require P >= 1");
  if (!(p.contention >= 0.0 && p.contention <= 1.0)) {
    out.push_back("c out of range: require 0 <= c <= 1 (got " + num(p.contention) + ")");
  }
  if (!(p.w_parallel > 0.0)) {
    out.push_back("w_p out of range: require w_p > 0 (got " + num(p.w_parallel) + ")");
  }
  if (!(p.w_snapshot >= 0.0)) {
    out.push_back("w_snapshot out of range: require w_snapshot >= 0 (got " + num(p.w_snapshot) + ")");
  }
  if (!(p.w_control >= 0.0)) {
    out.push_back("w_control out of range: require w_control >= 0 (got " + num(p.w_control) + ")");
  }
  if (!(p.hardness > 1.0)) out.push_back("h out of range: require h > 1 (got " + num(p.hardness) + ")");
  if (!(p.beta <= 1.0 && p.beta >= 0.0)) {
    out.push_back("beta out of range: require beta <= 1 (got " + num(p.beta) + ")");
  } else if (p.w_snapshot > 0.0 && !(1.0 / p.w_snapshot <= p.beta)) {
    out.push_back("beta below 1/w_snapshot: require 1/w_snapshot <= beta (1/w_snapshot = " +
                  num(1.0 / p.w_snapshot) + ", beta = " + num(p.beta) + ")");
  }
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) {
    out.push_back("alpha out of range: require 0 <= alpha <= 1 (got " + num(p.alpha) + ")");
  } else if (p.w_control > 0.0 && p.w_snapshot >= 0.0 &&
             !(p.alpha <= p.w_snapshot * p.beta / p.w_control)) {
    out.push_back("alpha above w_snapshot*beta/w_control: require alpha <= " +
                  num(p.w_snapshot * p.beta / p.w_control) + " (got " + num(p.alpha) + ")");
  }
  return out;
}

std::vector<ContentionEstimate> fit_contention(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw ModelError("no bench records to fit contention from");
  std::map<ConfigKey, ContentionEstimate> groups;
  for (const BenchRecord& r : records) {
    auto [it, inserted] = groups.try_emplace(key_of(r));
    ContentionEstimate& e = it->second;
    if (inserted) {
      e.variant = r.variant;
      e.threads = r.threads;
      e.workload = r.workload();
    }
    e.contention += contention_rate(r.retries, r.ops_completed);
    ++e.samples;
  }
  std::vector<ContentionEstimate> out;
  out.reserve(groups.size());
  for (auto& [key, e] : groups) {
    e.contention /= static_cast<double>(e.samples);
    out.push_back(e);
  }
  return out;
}

std::vector<ComparisonRow> predict_vs_measured(const std::vector<BenchRecord>& records,
                                               const ModelParams& tmpl) {
  if (records.empty()) throw ModelError("no bench records to compare against");
  struct Mean {
    double sum = 0.0;
    std::size_t n = 0;
    double value() const { return sum / static_cast<double>(n); }
  };
  std::map<ConfigKey, Mean> throughput;
  std::map<ConfigKey, const BenchRecord*> sample;
  for (const BenchRecord& r : records) {
    auto& m = throughput[key_of(r)];
    m.sum += r.throughput_ops_s;
    ++m.n;
    sample.try_emplace(key_of(r), &r);
  }
  std::map<ConfigKey, double> fitted;
  for (const ContentionEstimate& e : fit_contention(records)) {
    fitted[{e.variant, e.workload.key_range, e.workload.insert_pct, e.workload.delete_pct,
            e.workload.search_pct, e.threads}] = e.contention;
  }

  std::vector<ComparisonRow> rows;
  for (const auto& [key, mean] : throughput) {
    ConfigKey base_key = key;
    std::get<5>(base_key) = 1;
    auto base = throughput.find(base_key);
    if (base == throughput.end()) {
      throw ModelError("missing 1-thread baseline for " + describe(*sample.at(key)));
    }
    const BenchRecord& r = *sample.at(key);
    ModelParams p = tmpl;
    p.processors = r.threads;
    p.contention = fitted.at(key);

    ComparisonRow row;
    row.variant = r.variant;
    row.threads = r.threads;
    row.workload = r.workload();
    row.c_fitted = p.contention;
    row.measured_speedup = key == base_key ? 1.0 : mean.value() / base->second.value();
    row.predicted_speedup = concurrent_speedup(p);
    row.ratio = row.predicted_speedup > 0.0 ? row.measured_speedup / row.predicted_speedup
                                            : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << kComparisonCsvHeader << '\n';
  for (const ComparisonRow& row : rows) {
    out << to_string(row.variant) << ',' << row.threads << ',' << num(row.measured_speedup) << ','
        << num(row.predicted_speedup) << ',' << num(row.ratio) << ',' << num(row.c_fitted) << '\n';
  }
}

}  // namespace cbst
