#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gof::simd {

// Batch kernels for the Monte-Carlo inner loops, behind a runtime-selected
// dispatch table. Every variant of a kernel produces bit-identical output for
// identical input (the equivalence suite enforces this), so simulation results
// do not depend on which instruction set the host supports.
struct KernelTable {
  // Fills out[0..2*nblocks) with doubles strictly inside (0,1). Block b, for
  // b = block0..block0+nblocks-1, is one Philox4x32-10 invocation with counter
  // (lo32(b), hi32(b), lo32(stream), hi32(stream)) and key (lo32(key),
  // hi32(key)); each block yields two doubles carrying 52 random bits.
  void (*fill_u01)(uint64_t key, uint64_t stream, uint64_t block0,
                   uint64_t nblocks, double* out);

  // out[i] = -log(u[i]) * scale. Requires u[i] in (0,1).
  void (*exp_from_u01)(const double* u, double* out, size_t n, double scale);

  // out[i] = mu + sigma * Phi^{-1}(u[i]). Requires u[i] in (0,1).
  void (*normal_from_u01)(const double* u, double* out, size_t n, double mu,
                          double sigma);

  // Natural log, elementwise. Requires finite positive normal doubles.
  void (*log_array)(const double* x, double* out, size_t n);

  double (*sum)(const double* x, size_t n);

  // Sum of (x[i] - center)^2.
  double (*sum_sq_dev)(const double* x, size_t n, double center);

  // counts[j] = number of x in cell j of the right-closed partition induced by
  // the ascending breaks[0..nbreaks); counts has nbreaks+1 entries and is
  // overwritten. A value equal to a breakpoint lands in the lower cell.
  void (*count_cells)(const double* x, size_t n, const double* breaks,
                      size_t nbreaks, uint64_t* counts);

  const char* name;
};

const KernelTable& scalar_kernels() noexcept;

// True when the host supports AVX2+FMA (and the build carries the variant).
bool avx2_available() noexcept;

// Valid only when avx2_available() returns true.
const KernelTable& avx2_kernels() noexcept;

// Table used by the rest of the library. Defaults to the widest supported
// variant; the GOF_KERNELS environment variable (scalar|avx2|auto) overrides
// the default, and select_kernels() overrides both.
const KernelTable& active_kernels() noexcept;
void select_kernels(std::string_view name);

}  // namespace gof::simd
