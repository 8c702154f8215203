#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gof/estimators.hpp"
#include "gof/partition.hpp"
#include "gof/rng.hpp"

namespace gof {

// One full trial: draw a sample, estimate theta from the raw data, recompute
// expected counts at the estimate, count, and form the statistic.
struct TrialConfig {
  Family family = Family::Exponential;
  size_t sample_size = 0;
  Partition partition;
  EstimatorSpec estimator;
  // Guard against expected cell counts driven to ~0 by extreme estimates.
  double expected_count_floor = 1e-8;
  // Pins theta-hat instead of estimating; used by the exact-distribution
  // checks where the statistic's law must be a known multinomial functional.
  std::optional<ParamVector> estimate_override;

  void validate() const;
};

// Reusable per-worker buffers so the trial loop does not allocate.
struct TrialScratch {
  std::vector<double> uniforms;
  std::vector<double> draws;
  std::vector<double> probs;
  std::vector<double> expected;
  std::vector<uint64_t> counts;
};

// sum (C_i - Q_i)^2 / Q_i. Throws DegenerateCellError when any expected count
// is at or below the floor, std::invalid_argument when the expected counts do
// not sum to the observed total (1e-6 relative).
double pearson_statistic(const CellCounts& counts,
                         std::span<const double> expected, double floor = 1e-8);

double run_trial(const TrialConfig& cfg, const ParamVector& true_params,
                 RandomStream& rng);
double run_trial(const TrialConfig& cfg, const ParamVector& true_params,
                 RandomStream& rng, TrialScratch& scratch);

}  // namespace gof
