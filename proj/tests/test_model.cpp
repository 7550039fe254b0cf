#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cbst/model.hpp"
#include "model_oracle.hpp"

namespace cbst {
namespace {

ModelParams params(unsigned P, double c, double alpha, double ws_ratio, double wc_ratio) {
  ModelParams p;
  p.processors = P;
  p.contention = c;
  p.alpha = alpha;
  p.w_parallel = 1.0;
  p.w_snapshot = ws_ratio;
  p.w_control = wc_ratio;
  return p;
}

TEST(Model, AmdahlExamples) {
  EXPECT_DOUBLE_EQ(amdahl_speedup(0.0, 64), 1.0);
  EXPECT_DOUBLE_EQ(amdahl_speedup(1.0, 8), 8.0);
  EXPECT_NEAR(amdahl_speedup(0.5, 2), 4.0 / 3.0, 1e-12);
  for (double p : {0.0, 0.3, 0.9, 1.0}) EXPECT_DOUBLE_EQ(amdahl_speedup(p, 1), 1.0);
  for (unsigned P : {1u, 3u, 100u}) EXPECT_DOUBLE_EQ(amdahl_speedup(1.0, P), P);
  EXPECT_THROW(amdahl_speedup(1.5, 2), ModelError);
  EXPECT_THROW(amdahl_speedup(0.5, 0), ModelError);
}

TEST(Model, WorkloadAndParallelism) {
  ModelParams p = params(32, 0, 1, 0.25, 0.25);
  EXPECT_DOUBLE_EQ(parallel_workload(p), 1.5);
  p.w_parallel = 2;
  p.w_snapshot = 1;
  p.w_control = 0.5;
  EXPECT_DOUBLE_EQ(parallel_workload(p), 3.5);
  EXPECT_DOUBLE_EQ(effective_parallelism(params(32, 0, 1, 0, 0)), 32.0);
  EXPECT_DOUBLE_EQ(effective_parallelism(params(32, 1, 0.7, 0, 0)), 0.0);
  EXPECT_DOUBLE_EQ(effective_parallelism(params(16, 0.5, 0.5, 0, 0)), 4.0);
}

TEST(Model, ConcurrentSpeedupExamples) {
  EXPECT_DOUBLE_EQ(concurrent_speedup(params(32, 0, 1, 0, 0)), 32.0);
  EXPECT_NEAR(concurrent_speedup(params(16, 0.5, 0.5, 0.25, 0.25)), 4.0 / 1.5, 1e-9);
  ModelParams doubled = params(16, 0.5, 0.5, 0.25, 0.5);
  EXPECT_LT(concurrent_speedup(doubled), concurrent_speedup(params(16, 0.5, 0.5, 0.25, 0.25)));
}

TEST(Model, ConcurrentSpeedupNamesViolation) {
  try {
    concurrent_speedup(params(4, 1.5, 1, 0, 0));
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("c out of range", 0), 0u) << e.what();
  }
  ModelParams zero_wp = params(4, 0, 1, 0, 0);
  zero_wp.w_parallel = 0;
  EXPECT_THROW(concurrent_speedup(zero_wp), ModelError);
}

TEST(Model, AlphaCurve) {
  ModelParams p = params(1, 0, 1, 4, 1);
  p.beta = 0.2;  // asymptote 0.8
  p.hardness = 2;
  EXPECT_EQ(alpha_at(0, p), 0.0);
  EXPECT_NEAR(alpha_at(1, p), 0.4, 1e-12);
  EXPECT_NEAR(alpha_at(200, p), 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(alpha_ceiling(p), 0.8);
  p.hardness = 1;
  EXPECT_THROW(alpha_at(1, p), ModelError);
  p.hardness = 2;
  EXPECT_THROW(alpha_at(-1, p), ModelError);
  p.w_control = 0;
  EXPECT_THROW(alpha_at(1, p), ModelError);
}

TEST(Model, ValidateExamples) {
  ModelParams ok;
  ok.processors = 8;
  ok.contention = 0.1;
  ok.alpha = 0.2;
  ok.beta = 0.5;
  ok.w_snapshot = 4;
  ok.w_control = 1;
  ok.w_parallel = 1;
  EXPECT_TRUE(validate(ok).empty());

  ModelParams bad_c = ok;
  bad_c.contention = 1.5;
  auto problems = validate(bad_c);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_EQ(problems[0].rfind("c out of range", 0), 0u);

  ModelParams bad_beta = ok;
  bad_beta.beta = 1;
  bad_beta.w_snapshot = 0.5;
  bad_beta.alpha = 0.1;
  EXPECT_EQ(validate(bad_beta).size(), 1u);
}

TEST(Model, ValidateAgreesWithConstraintBlock) {
  std::mt19937_64 rng(11);
  int accepted = 0;
  for (int i = 0; i < 20000; ++i) {
    ModelParams p = testing::random_grid_params(rng);
    bool expected = testing::constraints_hold(p);
    ASSERT_EQ(validate(p).empty(), expected) << "iteration " << i;
    accepted += expected;
  }
  EXPECT_GT(accepted, 100);
}

TEST(Model, SpeedupMonotoneInEachCoordinate) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    ModelParams a = testing::random_valid_params(rng);
    ModelParams b = a;
    switch (i % 4) {
      case 0:
        b.contention = std::min(1.0, a.contention + unit(rng) * (1 - a.contention));
        ASSERT_LE(concurrent_speedup(b), concurrent_speedup(a));
        break;
      case 1:
        b.processors = a.processors + 1 + static_cast<unsigned>(rng() % 8);
        ASSERT_GE(concurrent_speedup(b), concurrent_speedup(a));
        break;
      case 2:
        b.w_snapshot = a.w_snapshot + unit(rng);
        ASSERT_LE(concurrent_speedup(b), concurrent_speedup(a));
        break;
      case 3:
        b.w_control = a.w_control + unit(rng);
        ASSERT_LE(concurrent_speedup(b), concurrent_speedup(a));
        break;
    }
  }
}

TEST(Model, AlphaCurveMonotoneAndBounded) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> time(0.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    ModelParams p = testing::random_valid_params(rng);
    double t1 = time(rng), t2 = time(rng);
    if (t1 > t2) std::swap(t1, t2);
    ASSERT_LE(alpha_at(t1, p), alpha_at(t2, p));
    ASSERT_LE(alpha_at(t2, p), alpha_ceiling(p));
    double closed = p.w_snapshot * p.beta / p.w_control * (1.0 - 1.0 / std::pow(p.hardness, t1));
    ASSERT_NEAR(alpha_at(t1, p), closed, 1e-9);
  }
}

BenchRecord record(Variant v, unsigned threads, double throughput, std::uint64_t retries,
                   std::uint64_t ops, unsigned repeat = 0) {
  BenchRecord r;
  r.variant = v;
  r.threads = threads;
  r.key_range = 100;
  r.insert_pct = 9;
  r.delete_pct = 1;
  r.search_pct = 90;
  r.throughput_ops_s = throughput;
  r.retries = retries;
  r.ops_completed = ops;
  r.repeat = repeat;
  return r;
}

TEST(Model, FitContention) {
  auto fits = fit_contention({record(Variant::kFEM, 1, 1, 0, 100)});
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_EQ(fits[0].contention, 0.0);
  fits = fit_contention({record(Variant::kFEM, 2, 1, 50, 50)});
  EXPECT_DOUBLE_EQ(fits[0].contention, 0.5);
  // c = 0.1, 0.2, 0.3 from retries/(retries+ops).
  fits = fit_contention({record(Variant::kFN, 4, 1, 1, 9, 0), record(Variant::kFN, 4, 1, 2, 8, 1),
                         record(Variant::kFN, 4, 1, 3, 7, 2)});
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_NEAR(fits[0].contention, 0.2, 1e-12);
  EXPECT_EQ(fits[0].samples, 3u);
  EXPECT_THROW(fit_contention({}), ModelError);
}

TEST(Model, PredictVsMeasured) {
  ModelParams tmpl;  // c fitted, alpha 1, no overheads
  auto rows = predict_vs_measured(
      {record(Variant::kFEM, 1, 100, 0, 10), record(Variant::kFEM, 1, 300, 0, 10, 1),
       record(Variant::kFEM, 4, 600, 0, 10)},
      tmpl);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].threads, 1u);
  EXPECT_EQ(rows[0].measured_speedup, 1.0);
  EXPECT_DOUBLE_EQ(rows[1].measured_speedup, 3.0);
  EXPECT_DOUBLE_EQ(rows[1].predicted_speedup, 4.0);
  EXPECT_DOUBLE_EQ(rows[1].ratio, 0.75);

  try {
    predict_vs_measured({record(Variant::kTN, 4, 1, 0, 1)}, tmpl);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("tn"), std::string::npos) << e.what();
  }

  std::ostringstream out;
  write_comparison_csv(out, rows);
  EXPECT_EQ(out.str().substr(0, kComparisonCsvHeader.size()), kComparisonCsvHeader);
}

}  // namespace
}  // namespace cbst
