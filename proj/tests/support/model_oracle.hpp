#pragma once

// Test-side transcription of the model's constraint block, written in
// multiplied-out form so it does not share code or rounding paths with
// cbst::validate. Parameters come from a dyadic grid, so both forms are
// exact and boundary cases land on equality.

#include <cmath>
#include <random>
#include <vector>

#include "cbst/model.hpp"

namespace cbst::testing {

inline bool constraints_hold(const ModelParams& p) {
  if (p.processors < 1) return false;
  if (p.contention < 0 || p.contention > 1) return false;
  if (p.w_parallel <= 0 || p.w_snapshot < 0 || p.w_control < 0) return false;
  if (p.hardness <= 1) return false;
  if (p.beta < 0 || p.beta > 1) return false;
  if (p.w_snapshot > 0 && p.w_snapshot * p.beta < 1) return false;
  if (p.alpha < 0 || p.alpha > 1) return false;
  if (p.w_control > 0 && p.alpha * p.w_control > p.w_snapshot * p.beta) return false;
  return true;
}

template <class T>
T pick(std::mt19937_64& rng, const std::vector<T>& choices) {
  return choices[rng() % choices.size()];
}

inline std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> out;
  for (double v = lo; v <= hi + step / 2; v += step) out.push_back(v);
  return out;
}

/// Mixture of valid and invalid parameters, edges included.
inline ModelParams random_grid_params(std::mt19937_64& rng) {
  ModelParams p;
  p.processors = pick<unsigned>(rng, {0, 1, 2, 4, 8, 16, 32});
  p.contention = pick(rng, steps(-0.25, 1.25, 0.125));
  p.alpha = pick(rng, steps(-0.0625, 1.0625, 0.0625));
  p.beta = pick(rng, steps(-0.125, 1.125, 0.125));
  p.w_parallel = pick<double>(rng, {-1, 0, 0.5, 1, 2});
  p.w_snapshot = pick<double>(rng, {-1, 0, 0.25, 0.5, 1, 2, 4, 8});
  p.w_control = pick<double>(rng, {-1, 0, 0.25, 0.5, 1, 2, 4, 8});
  p.hardness = pick<double>(rng, {0.5, 1, 1.5, 2, 4});
  return p;
}

/// Parameters inside the speedup formula's domain, continuous.
inline ModelParams random_valid_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ModelParams p;
  p.processors = 1 + static_cast<unsigned>(rng() % 64);
  p.contention = unit(rng);
  p.beta = 0.5 + 0.5 * unit(rng);
  p.w_parallel = 0.1 + 10 * unit(rng);
  p.w_snapshot = 1.0 / p.beta + 10 * unit(rng);
  p.w_control = 0.01 + 10 * unit(rng);
  p.alpha = std::min(1.0, p.w_snapshot * p.beta / p.w_control) * unit(rng);
  p.hardness = 1.0 + 1e-3 + 9 * unit(rng);
  return p;
}

}  // namespace cbst::testing
