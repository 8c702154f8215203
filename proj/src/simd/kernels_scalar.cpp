#include <cmath>
#include <cstddef>
#include <cstdint>

#include "gof/simd/kernels.hpp"
#include "simd/kernels_detail.hpp"

// Reference kernels. The accumulation structure (8 interleaved partial sums,
// fixed reduction tree, sequential tail) is part of the kernel contract: the
// AVX2 variant realizes the same structure with two 4-lane registers, so both
// produce identical bits.

namespace gof::simd {
namespace {

namespace d = detail;

void fill_u01_scalar(uint64_t key, uint64_t stream, uint64_t block0,
                     uint64_t nblocks, double* out) {
  for (uint64_t b = 0; b < nblocks; ++b) {
    const d::PhiloxBlock blk = d::philox_block(key, stream, block0 + b);
    out[2 * b] = d::u01_from_words(blk.x[0], blk.x[1]);
    out[2 * b + 1] = d::u01_from_words(blk.x[2], blk.x[3]);
  }
}

void exp_from_u01_scalar(const double* u, double* out, size_t n, double scale) {
  const double negscale = -scale;
  for (size_t i = 0; i < n; ++i) {
    out[i] = d::log_positive(u[i]) * negscale;
  }
}

void normal_from_u01_scalar(const double* u, double* out, size_t n, double mu,
                            double sigma) {
  for (size_t i = 0; i < n; ++i) {
    out[i] = std::fma(sigma, d::ppnd16(u[i]), mu);
  }
}

void log_array_scalar(const double* x, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    out[i] = d::log_positive(x[i]);
  }
}

double sum_scalar(const double* x, size_t n) {
  double acc[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int j = 0; j < 8; ++j) {
      acc[j] += x[i + j];
    }
  }
  const double v0 = acc[0] + acc[4];
  const double v1 = acc[1] + acc[5];
  const double v2 = acc[2] + acc[6];
  const double v3 = acc[3] + acc[7];
  double s = (v0 + v2) + (v1 + v3);
  for (; i < n; ++i) {
    s += x[i];
  }
  return s;
}

double sum_sq_dev_scalar(const double* x, size_t n, double center) {
  double acc[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int j = 0; j < 8; ++j) {
      const double dd = x[i + j] - center;
      acc[j] = std::fma(dd, dd, acc[j]);
    }
  }
  const double v0 = acc[0] + acc[4];
  const double v1 = acc[1] + acc[5];
  const double v2 = acc[2] + acc[6];
  const double v3 = acc[3] + acc[7];
  double s = (v0 + v2) + (v1 + v3);
  for (; i < n; ++i) {
    const double dd = x[i] - center;
    s = std::fma(dd, dd, s);
  }
  return s;
}

void count_cells_scalar(const double* x, size_t n, const double* breaks,
                        size_t nbreaks, uint64_t* counts) {
  for (size_t j = 0; j <= nbreaks; ++j) {
    counts[j] = 0;
  }
  for (size_t i = 0; i < n; ++i) {
    size_t idx = 0;
    for (size_t j = 0; j < nbreaks; ++j) {
      idx += (x[i] > breaks[j]) ? 1u : 0u;
    }
    ++counts[idx];
  }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table = {
      fill_u01_scalar,  exp_from_u01_scalar, normal_from_u01_scalar,
      log_array_scalar, sum_scalar,          sum_sq_dev_scalar,
      count_cells_scalar, "scalar"};
  return table;
}

}  // namespace gof::simd
