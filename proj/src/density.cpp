#include "gof/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gof/calibration.hpp"

namespace gof {

DensityEstimate density_export(std::span<const double> values,
                               size_t grid_size) {
  if (values.size() < 2) {
    throw std::domain_error("density_export needs at least two values");
  }
  if (grid_size < 2) {
    throw std::invalid_argument("density grid needs at least two points");
  }
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double vmin = *min_it;
  const double vmax = *max_it;
  if (!(vmax > vmin) || !std::isfinite(vmin) || !std::isfinite(vmax)) {
    throw std::domain_error("density_export needs data with positive spread");
  }

  MomentAccumulator acc;
  for (double v : values) {
    acc.add(v);
  }
  const double sd = std::sqrt(acc.variance());
  const std::array<double, 2> qp = {0.25, 0.75};
  const auto quartiles = sample_quantiles(values, qp);
  const double iqr = quartiles[1] - quartiles[0];
  const double spread = std::min(sd, iqr / 1.34);
  const double h =
      0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
  if (!(h > 0.0)) {
    throw std::domain_error(
        "density bandwidth degenerated to zero (no central spread)");
  }

  DensityEstimate est;
  est.bandwidth = h;
  const double x0 = vmin - 3.0 * h;
  const double x1 = vmax + 3.0 * h;
  const double dx = (x1 - x0) / static_cast<double>(grid_size - 1);
  est.grid.resize(grid_size);
  est.density.assign(grid_size, 0.0);
  for (size_t i = 0; i < grid_size; ++i) {
    est.grid[i] = x0 + dx * static_cast<double>(i);
  }

  // exact kernel sum with the gaussian cut at 8.5 sigma (tail mass < 1e-16)
  const double cut = 8.5 * h;
  const double inv_h = 1.0 / h;
  for (double v : values) {
    const double lo = (v - cut - x0) / dx;
    const double hi = (v + cut - x0) / dx;
    size_t i0 = lo > 0.0 ? static_cast<size_t>(std::ceil(lo)) : 0;
    size_t i1 = hi < static_cast<double>(grid_size - 1)
                    ? static_cast<size_t>(std::floor(hi))
                    : grid_size - 1;
    for (size_t i = i0; i <= i1 && i < grid_size; ++i) {
      const double t = (est.grid[i] - v) * inv_h;
      est.density[i] += std::exp(-0.5 * t * t);
    }
  }
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  const double scale =
      kInvSqrt2Pi / (static_cast<double>(values.size()) * h);
  for (double& d : est.density) {
    d *= scale;
  }
  return est;
}

}  // namespace gof
