#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gof {

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

// Gaussian-kernel density on an equally spaced grid over
// [min - 3h, max + 3h], bandwidth h = 0.9 * min(sd, IQR/1.34) * n^(-1/5).
// The result integrates to 1 within 1e-3 by the trapezoid rule.
DensityEstimate density_export(std::span<const double> values,
                               size_t grid_size);

}  // namespace gof
