#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "gof/rng.hpp"

namespace gof {

enum class Family { Exponential, Normal };

// Number of free parameters (the d in the n-1-d reference degrees of freedom).
int family_dimension(Family family) noexcept;
const char* family_name(Family family) noexcept;

// Parameter point: (rate) for the exponential family, (mu, sigma) for normal.
class ParamVector {
 public:
  ParamVector() = default;
  ParamVector(std::initializer_list<double> values);
  explicit ParamVector(std::span<const double> values);

  static ParamVector exponential_rate(double rate) { return {rate}; }
  static ParamVector normal(double mu, double sigma) { return {mu, sigma}; }

  double operator[](size_t i) const { return v_[i]; }
  size_t size() const { return n_; }
  std::span<const double> values() const { return {v_.data(), n_}; }

 private:
  std::array<double, 2> v_{};
  size_t n_ = 0;
};

// Throws std::invalid_argument when params are outside the family's domain.
void validate_params(Family family, const ParamVector& params);

// I.i.d. draws, deterministic given the stream state.
void sample_into(Family family, const ParamVector& params,
                 std::span<double> out, RandomStream& rng);
std::vector<double> sample(Family family, const ParamVector& params,
                           size_t count, RandomStream& rng);

double cdf(Family family, const ParamVector& params, double x);
double family_quantile(Family family, const ParamVector& params, double p);

double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x); series for x < a+1, continued
// fraction otherwise.
double regularized_gamma_p(double a, double x);

struct GammaParams {
  GammaParams(double alpha_, double lambda_);
  double alpha;   // shape
  double lambda;  // rate
  double mean() const { return alpha / lambda; }
  double variance() const { return alpha / (lambda * lambda); }
};

double gamma_cdf(const GammaParams& g, double x);
double gamma_pdf(const GammaParams& g, double x);

// Inverse CDF by bracketed Newton; |cdf(result) - p| <= 1e-10 for
// p in [1e-6, 1-1e-6].
double gamma_quantile(const GammaParams& g, double p);

// Same code path as gamma_quantile with (dof/2, 1/2).
double chi_square_quantile(int dof, double p);

}  // namespace gof
