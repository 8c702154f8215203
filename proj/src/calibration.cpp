#include "gof/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "gof/errors.hpp"

namespace gof {

PriorSpec PriorSpec::fixed_at(ParamVector theta) {
  PriorSpec p;
  p.kind = Kind::Fixed;
  p.fixed = theta;
  return p;
}

PriorSpec PriorSpec::uniform_box(ParamVector lo, ParamVector hi) {
  PriorSpec p;
  p.kind = Kind::UniformBox;
  p.lower = lo;
  p.upper = hi;
  return p;
}

void PriorSpec::validate(Family family) const {
  const size_t dim = static_cast<size_t>(family_dimension(family));
  if (kind == Kind::Fixed) {
    validate_params(family, fixed);
    return;
  }
  if (lower.size() != dim || upper.size() != dim) {
    throw std::invalid_argument("prior box dimension does not match family");
  }
  for (size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) ||
        !(lower[i] < upper[i])) {
      throw std::invalid_argument(
          "prior box needs lower < upper in every component");
    }
  }
  // every point of the box must be a valid parameter
  validate_params(family, lower.size() == 1
                              ? ParamVector{lower[0]}
                              : ParamVector{lower[0], lower[1]});
}

ParamVector draw_theta(const PriorSpec& prior, RandomStream& rng) {
  if (prior.kind == PriorSpec::Kind::Fixed) {
    return prior.fixed;
  }
  std::array<double, 2> v{};
  const size_t dim = prior.lower.size();
  for (size_t i = 0; i < dim; ++i) {
    const double u = rng.next_u01();
    v[i] = prior.lower[i] + u * (prior.upper[i] - prior.lower[i]);
  }
  return ParamVector(std::span<const double>(v.data(), dim));
}

void MomentAccumulator::add(double x) noexcept {
  ++count;
  const double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
}

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
  if (other.count == 0) {
    return;
  }
  if (count == 0) {
    *this = other;
    return;
  }
  const double d = other.mean - mean;
  const uint64_t n = count + other.count;
  const double w = static_cast<double>(other.count) / static_cast<double>(n);
  mean += d * w;
  m2 += other.m2 + d * d * static_cast<double>(count) * w;
  count = n;
}

double MomentAccumulator::variance() const {
  if (count < 2) {
    throw std::logic_error("variance needs at least two observations");
  }
  return m2 / static_cast<double>(count - 1);
}

GammaParams fit_gamma(double mean, double variance) {
  if (!(mean > 0.0) || !std::isfinite(mean) || !(variance > 0.0) ||
      !std::isfinite(variance)) {
    throw DegenerateMomentsError(
        "gamma moment matching needs positive mean and variance");
  }
  return GammaParams(mean * mean / variance, mean / variance);
}

void CalibrationConfig::validate() const {
  trial.validate();
  prior.validate(trial.family);
  if (trials < 2) {
    throw std::invalid_argument("calibration needs at least two trials");
  }
  if (quantile_probs.empty()) {
    throw std::invalid_argument("quantile_probs must not be empty");
  }
  double prev = 0.0;
  for (double p : quantile_probs) {
    if (!(p > 0.0) || !(p < 1.0)) {
      throw std::invalid_argument("quantile probs must lie inside (0,1)");
    }
    if (!(p > prev)) {
      throw std::invalid_argument("quantile probs must be strictly increasing");
    }
    prev = p;
  }
  if (!(rejection_threshold >= 0.0) || !(rejection_threshold <= 1.0)) {
    throw std::invalid_argument("rejection threshold must lie in [0,1]");
  }
  if (!retain_samples && quantile_reservoir < 2) {
    throw std::invalid_argument("quantile reservoir must hold >= 2 values");
  }
}

std::vector<double> sample_quantiles(std::span<const double> values,
                                     std::span<const double> probs) {
  if (values.empty()) {
    throw std::domain_error("sample_quantiles needs a nonempty sample");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probs.size());
  const size_t n = sorted.size();
  for (double p : probs) {
    if (!(p > 0.0) || !(p < 1.0)) {
      throw std::domain_error("quantile prob must lie inside (0,1)");
    }
    const double h = static_cast<double>(n - 1) * p;
    const size_t lo = static_cast<size_t>(h);
    const double frac = h - static_cast<double>(lo);
    double q = sorted[lo];
    if (frac > 0.0 && lo + 1 < n) {
      q += frac * (sorted[lo + 1] - sorted[lo]);
    }
    out.push_back(q);
  }
  return out;
}

CalibrationResult run_calibration(const CalibrationConfig& cfg) {
  cfg.validate();
  const uint64_t trials = cfg.trials;
  const uint64_t stride =
      cfg.retain_samples
          ? 1
          : std::max<uint64_t>(
                1, (trials + cfg.quantile_reservoir - 1) / cfg.quantile_reservoir);
  const uint64_t slots = (trials + stride - 1) / stride;
  std::vector<double> kept(slots, std::numeric_limits<double>::quiet_NaN());

  unsigned workers = cfg.threads != 0 ? cfg.threads
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<uint64_t>(workers, trials));

  std::vector<MomentAccumulator> accs(workers);
  std::vector<uint64_t> rejected(workers, 0);
  std::vector<std::exception_ptr> failures(workers);

  auto work = [&](unsigned w) {
    const uint64_t lo = trials * w / workers;
    const uint64_t hi = trials * (w + 1) / workers;
    TrialScratch scratch;
    for (uint64_t k = lo; k < hi; ++k) {
      RandomStream rs(cfg.seed, k);
      try {
        const ParamVector theta = draw_theta(cfg.prior, rs);
        const double value = run_trial(cfg.trial, theta, rs, scratch);
        accs[w].add(value);
        if (k % stride == 0) {
          kept[k / stride] = value;
        }
      } catch (const DegenerateSampleError&) {
        ++rejected[w];
      } catch (const DegenerateCellError&) {
        ++rejected[w];
      } catch (...) {
        failures[w] = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work, w);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }

  MomentAccumulator total;
  for (const auto& a : accs) {
    total.merge(a);
  }
  uint64_t total_rejected = 0;
  for (uint64_t r : rejected) {
    total_rejected += r;
  }
  if (static_cast<double>(total_rejected) >
      cfg.rejection_threshold * static_cast<double>(trials)) {
    throw CalibrationIntegrityError(
        "rejected " + std::to_string(total_rejected) + " of " +
        std::to_string(trials) + " trials (threshold " +
        std::to_string(cfg.rejection_threshold) + ")");
  }
  if (total.count < 2) {
    throw CalibrationIntegrityError("fewer than two completed trials");
  }

  CalibrationResult result;
  result.mean_x2 = total.mean;
  result.var_x2 = total.variance();
  result.gamma = fit_gamma(result.mean_x2, result.var_x2);
  // moment matching must hold to rounding; anything else is a programming error
  if (std::fabs(result.gamma.mean() - result.mean_x2) >
          1e-10 * result.mean_x2 ||
      std::fabs(result.gamma.variance() - result.var_x2) >
          1e-10 * result.var_x2) {
    throw std::logic_error("fitted gamma does not match the sample moments");
  }

  result.trials_completed = total.count;
  result.trials_rejected = total_rejected;
  result.chisq_dof =
      static_cast<int>(cfg.trial.partition.cell_count()) - 1 -
      family_dimension(cfg.trial.family);
  result.quantile_probs = cfg.quantile_probs;
  result.gamma_quantiles.reserve(cfg.quantile_probs.size());
  result.chisq_quantiles.reserve(cfg.quantile_probs.size());
  for (double p : cfg.quantile_probs) {
    result.gamma_quantiles.push_back(gamma_quantile(result.gamma, p));
    result.chisq_quantiles.push_back(chi_square_quantile(result.chisq_dof, p));
  }

  kept.erase(std::remove_if(kept.begin(), kept.end(),
                            [](double v) { return std::isnan(v); }),
             kept.end());
  result.samples = std::move(kept);
  result.samples_are_subsample = stride > 1;
  if (result.samples.empty()) {
    throw CalibrationIntegrityError("no retained statistics");
  }
  result.sample_quantiles = sample_quantiles(result.samples, cfg.quantile_probs);
  return result;
}

}  // namespace gof
