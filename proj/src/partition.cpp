#include "gof/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gof/simd/kernels.hpp"

namespace gof {

Partition::Partition(std::vector<double> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) {
    throw std::invalid_argument("partition needs at least one breakpoint");
  }
  for (double b : breakpoints_) {
    if (!std::isfinite(b)) {
      throw std::invalid_argument("partition breakpoints must be finite");
    }
  }
  if (std::adjacent_find(breakpoints_.begin(), breakpoints_.end(),
                         [](double a, double b) { return a >= b; }) !=
      breakpoints_.end()) {
    throw std::invalid_argument(
        "partition breakpoints must be strictly increasing");
  }
}

void cell_probabilities_into(Family family, const ParamVector& params,
                             const Partition& part, std::span<double> out) {
  const auto breaks = part.breakpoints();
  if (out.size() != part.cell_count()) {
    throw std::invalid_argument("cell_probabilities output size mismatch");
  }
  double prev = 0.0;
  for (size_t i = 0; i < breaks.size(); ++i) {
    const double c = cdf(family, params, breaks[i]);
    out[i] = std::max(0.0, c - prev);
    prev = c;
  }
  out[breaks.size()] = std::max(0.0, 1.0 - prev);
}

std::vector<double> cell_probabilities(Family family, const ParamVector& params,
                                       const Partition& part) {
  std::vector<double> out(part.cell_count());
  cell_probabilities_into(family, params, part, out);
  return out;
}

Partition equiprobable_partition(Family family, const ParamVector& params,
                                 size_t cells) {
  if (cells < 2) {
    throw std::invalid_argument("equiprobable partition needs >= 2 cells");
  }
  std::vector<double> breaks(cells - 1);
  for (size_t k = 1; k < cells; ++k) {
    breaks[k - 1] = family_quantile(
        family, params,
        static_cast<double>(k) / static_cast<double>(cells));
  }
  return Partition(std::move(breaks));
}

void count_cells_into(std::span<const double> sample, const Partition& part,
                      std::span<uint64_t> out) {
  if (sample.empty()) {
    throw std::invalid_argument("count_cells requires a nonempty sample");
  }
  if (out.size() != part.cell_count()) {
    throw std::invalid_argument("count_cells output size mismatch");
  }
  const auto breaks = part.breakpoints();
  simd::active_kernels().count_cells(sample.data(), sample.size(),
                                     breaks.data(), breaks.size(), out.data());
}

CellCounts count_cells(std::span<const double> sample, const Partition& part) {
  CellCounts cc;
  cc.counts.resize(part.cell_count());
  count_cells_into(sample, part, cc.counts);
  cc.total = sample.size();
  return cc;
}

}  // namespace gof
