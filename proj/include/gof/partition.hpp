#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gof/distributions.hpp"

namespace gof {

// Ordered breakpoints a_1 < ... < a_{n-1} inducing n right-closed cells
// (-inf, a_1], (a_1, a_2], ..., (a_{n-1}, +inf) covering the real line. A
// value equal to a breakpoint always lands in the lower cell.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<double> breakpoints);

  std::span<const double> breakpoints() const { return breakpoints_; }
  size_t cell_count() const { return breakpoints_.size() + 1; }

 private:
  std::vector<double> breakpoints_;
};

struct CellCounts {
  std::vector<uint64_t> counts;
  uint64_t total = 0;
};

// p_i = F(a_i) - F(a_{i-1}); nonnegative, sums to 1 within 1e-12.
void cell_probabilities_into(Family family, const ParamVector& params,
                             const Partition& part, std::span<double> out);
std::vector<double> cell_probabilities(Family family, const ParamVector& params,
                                       const Partition& part);

// Breakpoints at the k/n quantiles, k = 1..n-1.
Partition equiprobable_partition(Family family, const ParamVector& params,
                                 size_t cells);

void count_cells_into(std::span<const double> sample, const Partition& part,
                      std::span<uint64_t> out);
CellCounts count_cells(std::span<const double> sample, const Partition& part);

}  // namespace gof
