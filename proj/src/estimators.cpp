#include "gof/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "gof/errors.hpp"
#include "gof/simd/kernels.hpp"

namespace gof {

ParamVector estimate(const EstimatorSpec& spec, std::span<const double> sample) {
  if (sample.size() < 2) {
    throw std::invalid_argument("estimate requires a sample of length >= 2");
  }
  const auto& k = simd::active_kernels();
  const double n = static_cast<double>(sample.size());
  const double mean = k.sum(sample.data(), sample.size()) / n;
  if (spec.family == Family::Exponential) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
      throw DegenerateSampleError(
          "exponential estimator needs a positive sample mean");
    }
    return ParamVector::exponential_rate(1.0 / mean);
  }
  const double ss = k.sum_sq_dev(sample.data(), sample.size(), mean);
  const double divisor =
      spec.normal_variance == VarianceDivisor::Unbiased ? n - 1.0 : n;
  const double var = ss / divisor;
  if (!(var > 0.0) || !std::isfinite(var)) {
    throw DegenerateSampleError(
        "normal estimator needs a positive sample variance");
  }
  return ParamVector::normal(mean, std::sqrt(var));
}

}  // namespace gof
