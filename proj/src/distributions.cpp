#include "gof/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gof/errors.hpp"
#include "gof/simd/kernels.hpp"
#include "simd/kernels_detail.hpp"

namespace gof {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

[[noreturn]] void domain_fail(const std::string& msg) {
  throw std::domain_error(msg);
}

void check_probability(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    domain_fail("probability must lie strictly inside (0,1), got " +
                std::to_string(p));
  }
}

double normal_cdf_std(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_pdf_std(double z) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

}  // namespace

int family_dimension(Family family) noexcept {
  return family == Family::Exponential ? 1 : 2;
}

const char* family_name(Family family) noexcept {
  return family == Family::Exponential ? "exponential" : "normal";
}

ParamVector::ParamVector(std::initializer_list<double> values) {
  if (values.size() > v_.size()) {
    throw std::invalid_argument("ParamVector holds at most two components");
  }
  n_ = values.size();
  std::copy(values.begin(), values.end(), v_.begin());
}

ParamVector::ParamVector(std::span<const double> values) {
  if (values.size() > v_.size()) {
    throw std::invalid_argument("ParamVector holds at most two components");
  }
  n_ = values.size();
  std::copy(values.begin(), values.end(), v_.begin());
}

void validate_params(Family family, const ParamVector& params) {
  switch (family) {
    case Family::Exponential:
      if (params.size() != 1) {
        throw std::invalid_argument("exponential family takes one parameter");
      }
      if (!(params[0] > 0.0) || !std::isfinite(params[0])) {
        throw std::invalid_argument("exponential rate must be positive");
      }
      return;
    case Family::Normal:
      if (params.size() != 2) {
        throw std::invalid_argument("normal family takes two parameters");
      }
      if (!std::isfinite(params[0])) {
        throw std::invalid_argument("normal mean must be finite");
      }
      if (!(params[1] > 0.0) || !std::isfinite(params[1])) {
        throw std::invalid_argument("normal sigma must be positive");
      }
      return;
  }
  throw std::invalid_argument("unknown family");
}

void sample_into(Family family, const ParamVector& params,
                 std::span<double> out, RandomStream& rng) {
  validate_params(family, params);
  if (out.empty()) {
    return;
  }
  std::vector<double> uniforms(out.size());
  rng.fill_u01(uniforms);
  const auto& k = simd::active_kernels();
  if (family == Family::Exponential) {
    k.exp_from_u01(uniforms.data(), out.data(), out.size(), 1.0 / params[0]);
  } else {
    k.normal_from_u01(uniforms.data(), out.data(), out.size(), params[0],
                      params[1]);
  }
}

std::vector<double> sample(Family family, const ParamVector& params,
                           size_t count, RandomStream& rng) {
  if (count == 0) {
    throw std::invalid_argument("sample: count must be positive");
  }
  std::vector<double> out(count);
  sample_into(family, params, out, rng);
  return out;
}

double cdf(Family family, const ParamVector& params, double x) {
  validate_params(family, params);
  if (family == Family::Exponential) {
    return x <= 0.0 ? 0.0 : -std::expm1(-params[0] * x);
  }
  return normal_cdf_std((x - params[0]) / params[1]);
}

double family_quantile(Family family, const ParamVector& params, double p) {
  validate_params(family, params);
  check_probability(p);
  if (family == Family::Exponential) {
    return -std::log1p(-p) / params[0];
  }
  // AS241 start, one Newton step against our own cdf for round-trip agreement
  const double mu = params[0];
  const double sigma = params[1];
  double x = std::fma(sigma, simd::detail::ppnd16(p), mu);
  const double pdf = normal_pdf_std((x - mu) / sigma) / sigma;
  if (pdf > 1e-300) {
    x -= (cdf(family, params, x) - p) / pdf;
  }
  return x;
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    domain_fail("log_gamma requires x > 0");
  }
  return std::lgamma(x);
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    domain_fail("regularized_gamma_p requires a > 0");
  }
  if (std::isnan(x) || x < 0.0) {
    domain_fail("regularized_gamma_p requires x >= 0");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return 1.0;
  }
  const double logpre = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    // lower series
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int it = 0; it < 500; ++it) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-17) {
        break;
      }
    }
    return std::clamp(sum * std::exp(logpre), 0.0, 1.0);
  }
  // modified Lentz continued fraction for Q(a,x)
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double dd = 1.0 / b;
  double h = dd;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    dd = an * dd + b;
    if (std::fabs(dd) < tiny) {
      dd = tiny;
    }
    c = b + an / c;
    if (std::fabs(c) < tiny) {
      c = tiny;
    }
    dd = 1.0 / dd;
    const double delta = dd * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) {
      break;
    }
  }
  return std::clamp(1.0 - std::exp(logpre) * h, 0.0, 1.0);
}

GammaParams::GammaParams(double alpha_, double lambda_)
    : alpha(alpha_), lambda(lambda_) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("gamma shape must be positive and finite");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("gamma rate must be positive and finite");
  }
}

double gamma_cdf(const GammaParams& g, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  return regularized_gamma_p(g.alpha, g.lambda * x);
}

double gamma_pdf(const GammaParams& g, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  return std::exp(g.alpha * std::log(g.lambda) + (g.alpha - 1.0) * std::log(x) -
                  g.lambda * x - log_gamma(g.alpha));
}

double gamma_quantile(const GammaParams& g, double p) {
  check_probability(p);
  double lo = 0.0;
  double hi = g.mean() + 40.0 * std::sqrt(g.variance());
  for (int i = 0; i < 120 && gamma_cdf(g, hi) < p; ++i) {
    hi *= 2.0;
  }
  // Wilson-Hilferty start, clamped into the bracket
  const double z = simd::detail::ppnd16(p);
  const double a = g.alpha;
  const double wh = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
  double x = a * wh * wh * wh / g.lambda;
  if (!(x > lo) || !(x < hi) || !std::isfinite(x)) {
    x = 0.5 * (lo + hi);
  }
  for (int it = 0; it < 200; ++it) {
    const double f = gamma_cdf(g, x) - p;
    if (f == 0.0) {
      return x;
    }
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double pdf = gamma_pdf(g, x);
    double next;
    if (pdf > 1e-300 && std::isfinite(pdf)) {
      next = x - f / pdf;
      if (next == x) {
        return x;  // correction rounded below one ulp
      }
      if (!(next > lo) || !(next < hi)) {
        next = 0.5 * (lo + hi);
      }
    } else {
      next = 0.5 * (lo + hi);
    }
    const double step = std::fabs(next - x);
    x = next;
    if (step <= 1e-12 * std::fabs(x) + 1e-300) {
      return x;
    }
  }
  throw NumericError("gamma_quantile failed to converge at p=" +
                     std::to_string(p));
}

double chi_square_quantile(int dof, double p) {
  if (dof < 1) {
    domain_fail("chi_square_quantile requires dof >= 1");
  }
  return gamma_quantile(GammaParams(0.5 * static_cast<double>(dof), 0.5), p);
}

}  // namespace gof
