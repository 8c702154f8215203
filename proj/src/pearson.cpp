#include "gof/pearson.hpp"

#include <cmath>
#include <stdexcept>

#include "gof/errors.hpp"
#include "gof/simd/kernels.hpp"

namespace gof {

namespace {

double statistic_over_cells(std::span<const uint64_t> counts,
                            std::span<const double> expected, double floor) {
  double stat = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    const double q = expected[i];
    if (!(q > floor)) {
      throw DegenerateCellError("expected cell count at or below floor");
    }
    const double d = static_cast<double>(counts[i]) - q;
    stat += d * d / q;
  }
  return stat;
}

}  // namespace

void TrialConfig::validate() const {
  if (sample_size < 2) {
    throw std::invalid_argument("trial sample size must be >= 2");
  }
  const size_t min_cells =
      static_cast<size_t>(family_dimension(family)) + 2;
  if (partition.cell_count() < min_cells) {
    throw std::invalid_argument(
        "partition must have at least dimension + 2 cells");
  }
  if (estimator.family != family) {
    throw std::invalid_argument("estimator family does not match the trial");
  }
  if (!(expected_count_floor > 0.0)) {
    throw std::invalid_argument("expected count floor must be positive");
  }
  if (estimate_override) {
    validate_params(family, *estimate_override);
  }
}

double pearson_statistic(const CellCounts& counts,
                         std::span<const double> expected, double floor) {
  if (counts.counts.size() != expected.size()) {
    throw std::invalid_argument("counts/expected length mismatch");
  }
  double total_expected = 0.0;
  for (double q : expected) {
    total_expected += q;
  }
  const double total = static_cast<double>(counts.total);
  if (std::fabs(total_expected - total) > 1e-6 * std::max(1.0, total)) {
    throw std::invalid_argument(
        "expected counts must sum to the observed total");
  }
  return statistic_over_cells(counts.counts, expected, floor);
}

double run_trial(const TrialConfig& cfg, const ParamVector& true_params,
                 RandomStream& rng, TrialScratch& s) {
  const size_t n = cfg.sample_size;
  const size_t cells = cfg.partition.cell_count();
  s.uniforms.resize(n);
  s.draws.resize(n);
  s.probs.resize(cells);
  s.expected.resize(cells);
  s.counts.resize(cells);

  rng.fill_u01(s.uniforms);
  const auto& k = simd::active_kernels();
  if (cfg.family == Family::Exponential) {
    k.exp_from_u01(s.uniforms.data(), s.draws.data(), n, 1.0 / true_params[0]);
  } else {
    k.normal_from_u01(s.uniforms.data(), s.draws.data(), n, true_params[0],
                      true_params[1]);
  }

  const ParamVector theta_hat =
      cfg.estimate_override ? *cfg.estimate_override
                            : estimate(cfg.estimator, s.draws);
  cell_probabilities_into(cfg.family, theta_hat, cfg.partition, s.probs);
  const double nd = static_cast<double>(n);
  for (size_t i = 0; i < cells; ++i) {
    s.expected[i] = nd * s.probs[i];
  }
  const auto breaks = cfg.partition.breakpoints();
  k.count_cells(s.draws.data(), n, breaks.data(), breaks.size(),
                s.counts.data());
  return statistic_over_cells(s.counts, s.expected, cfg.expected_count_floor);
}

double run_trial(const TrialConfig& cfg, const ParamVector& true_params,
                 RandomStream& rng) {
  cfg.validate();
  validate_params(cfg.family, true_params);
  TrialScratch scratch;
  return run_trial(cfg, true_params, rng, scratch);
}

}  // namespace gof
