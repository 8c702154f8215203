#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gof/distributions.hpp"
#include "gof/pearson.hpp"
#include "gof/rng.hpp"

namespace gof {

// Distribution placed over the unknown true parameter. A uniform box makes the
// fitted gamma independent of any particular true value; Fixed reproduces the
// known-parameter setting.
struct PriorSpec {
  enum class Kind { Fixed, UniformBox };
  Kind kind = Kind::Fixed;
  ParamVector fixed;
  ParamVector lower;
  ParamVector upper;

  static PriorSpec fixed_at(ParamVector theta);
  static PriorSpec uniform_box(ParamVector lo, ParamVector hi);
  void validate(Family family) const;
};

ParamVector draw_theta(const PriorSpec& prior, RandomStream& rng);

// Welford single-pass mean/variance state with parallel merge.
struct MomentAccumulator {
  uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  void merge(const MomentAccumulator& other) noexcept;
  double variance() const;  // sample variance (count-1 divisor); count >= 2
};

// alpha = mean^2/var, lambda = mean/var. Throws DegenerateMomentsError for
// nonpositive inputs.
GammaParams fit_gamma(double mean, double variance);

struct CalibrationConfig {
  TrialConfig trial;
  PriorSpec prior;
  uint64_t trials = 0;
  uint64_t seed = 0;
  // Keep every statistic (8 bytes each) for exact sample quantiles and
  // density export; otherwise keep a deterministic stride subsample of about
  // quantile_reservoir values.
  bool retain_samples = true;
  size_t quantile_reservoir = 100000;
  std::vector<double> quantile_probs = {0.75, 0.9, 0.95, 0.99};
  // Fail the run when more than this fraction of trials is rejected.
  double rejection_threshold = 0.001;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct CalibrationResult {
  double mean_x2 = 0.0;
  double var_x2 = 0.0;
  GammaParams gamma{1.0, 1.0};
  int chisq_dof = 0;
  std::vector<double> quantile_probs;
  std::vector<double> sample_quantiles;
  std::vector<double> gamma_quantiles;
  std::vector<double> chisq_quantiles;
  uint64_t trials_completed = 0;
  uint64_t trials_rejected = 0;
  // Retained statistics in trial order (a stride subsample when
  // retain_samples was off).
  std::vector<double> samples;
  bool samples_are_subsample = false;
};

// Runs the full procedure: simulate trials with randomized theta, accumulate
// the first two moments, fit the gamma, and extract quantiles. Trial k always
// uses the stream derived from (seed, k), so results do not depend on the
// worker count.
CalibrationResult run_calibration(const CalibrationConfig& cfg);

// Order-statistic quantile with linear interpolation at rank 1 + (n-1)p.
std::vector<double> sample_quantiles(std::span<const double> values,
                                     std::span<const double> probs);

}  // namespace gof
