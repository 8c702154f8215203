#pragma once

#include <span>

#include "gof/distributions.hpp"

namespace gof {

enum class VarianceDivisor { Unbiased, Mle };

// Raw-data estimator T(X) -> theta-hat; one method per family (maximum
// likelihood, which coincides with the method of moments here).
struct EstimatorSpec {
  Family family = Family::Exponential;
  // Divisor for the normal sample variance: N-1 by default, N for the MLE.
  VarianceDivisor normal_variance = VarianceDivisor::Unbiased;
};

// Exponential: rate-hat = 1/mean. Normal: (mean, sqrt(sample variance)).
ParamVector estimate(const EstimatorSpec& spec, std::span<const double> sample);

}  // namespace gof
