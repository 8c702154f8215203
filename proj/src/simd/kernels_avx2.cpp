#include <cstddef>
#include <cstdint>

#include "gof/simd/kernels.hpp"
#include "simd/kernels_detail.hpp"

// AVX2+FMA kernel variant. Mirrors the scalar reference operation-for-
// operation; see kernels_detail.hpp for why that makes the outputs
// bit-identical. Only compiled with AVX2 codegen on x86-64 (see src/CMakeLists)
// and only dispatched to after a runtime CPU check.

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace gof::simd {
namespace {

namespace d = detail;

// ---- Philox4x32-10, eight blocks per call ---------------------------------

// 32x32 -> 64 multiply on all eight dword lanes; _mm256_mul_epu32 covers the
// even lanes, the odd lanes go through a shift.
inline void mulhilo8(__m256i x, __m256i m, __m256i& lo, __m256i& hi) {
  const __m256i pe = _mm256_mul_epu32(x, m);
  const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), m);
  lo = _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), po, 0xAA);
}

struct Philox8 {
  __m256i x0, x1, x2, x3;  // word i of blocks 0..7
};

inline Philox8 philox8_blocks(uint64_t key, uint64_t stream, uint64_t block0) {
  alignas(32) uint32_t c0a[8];
  alignas(32) uint32_t c1a[8];
  for (int i = 0; i < 8; ++i) {
    const uint64_t b = block0 + static_cast<uint64_t>(i);
    c0a[i] = static_cast<uint32_t>(b);
    c1a[i] = static_cast<uint32_t>(b >> 32);
  }
  __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c0a));
  __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c1a));
  __m256i c2 = _mm256_set1_epi32(static_cast<int>(static_cast<uint32_t>(stream)));
  __m256i c3 = _mm256_set1_epi32(static_cast<int>(static_cast<uint32_t>(stream >> 32)));
  uint32_t k0 = static_cast<uint32_t>(key);
  uint32_t k1 = static_cast<uint32_t>(key >> 32);
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(d::kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(d::kPhiloxM1));
  for (int r = 0; r < 10; ++r) {
    if (r != 0) {
      k0 += d::kPhiloxW0;
      k1 += d::kPhiloxW1;
    }
    const __m256i k0v = _mm256_set1_epi32(static_cast<int>(k0));
    const __m256i k1v = _mm256_set1_epi32(static_cast<int>(k1));
    __m256i lo0, hi0, lo1, hi1;
    mulhilo8(c0, m0, lo0, hi0);
    mulhilo8(c2, m1, lo1, hi1);
    const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0v);
    const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1v);
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
  }
  return {c0, c1, c2, c3};
}

// qwords (each < 2^64) -> doubles in (0,1), matching u01_from_words exactly:
// the 2^52 magic realizes the same exact uint->double conversion.
inline __m256d to_u01(__m256i v) {
  const __m256i w = _mm256_or_si256(_mm256_srli_epi64(v, 12),
                                    _mm256_set1_epi64x(0x4330000000000000LL));
  const __m256d dw =
      _mm256_sub_pd(_mm256_castsi256_pd(w), _mm256_set1_pd(0x1p52));
  return _mm256_add_pd(_mm256_mul_pd(dw, _mm256_set1_pd(0x1p-52)),
                       _mm256_set1_pd(0x1p-53));
}

void fill_u01_avx2(uint64_t key, uint64_t stream, uint64_t block0,
                   uint64_t nblocks, double* out) {
  uint64_t b = 0;
  for (; b + 8 <= nblocks; b += 8) {
    const Philox8 ph = philox8_blocks(key, stream, block0 + b);
    // re-pair the SoA words into per-block qwords (x1:x0) and (x3:x2)
    const __m256i va_lo = _mm256_unpacklo_epi32(ph.x0, ph.x1);  // blocks 0,1 | 4,5
    const __m256i va_hi = _mm256_unpackhi_epi32(ph.x0, ph.x1);  // blocks 2,3 | 6,7
    const __m256i vb_lo = _mm256_unpacklo_epi32(ph.x2, ph.x3);
    const __m256i vb_hi = _mm256_unpackhi_epi32(ph.x2, ph.x3);
    const __m256i a03 = _mm256_permute2x128_si256(va_lo, va_hi, 0x20);
    const __m256i a47 = _mm256_permute2x128_si256(va_lo, va_hi, 0x31);
    const __m256i b03 = _mm256_permute2x128_si256(vb_lo, vb_hi, 0x20);
    const __m256i b47 = _mm256_permute2x128_si256(vb_lo, vb_hi, 0x31);
    const __m256d ua03 = to_u01(a03);
    const __m256d ub03 = to_u01(b03);
    const __m256d ua47 = to_u01(a47);
    const __m256d ub47 = to_u01(b47);
    const __m256d lo03 = _mm256_unpacklo_pd(ua03, ub03);  // a0,b0 | a2,b2
    const __m256d hi03 = _mm256_unpackhi_pd(ua03, ub03);  // a1,b1 | a3,b3
    _mm256_storeu_pd(out + 2 * b, _mm256_permute2f128_pd(lo03, hi03, 0x20));
    _mm256_storeu_pd(out + 2 * b + 4, _mm256_permute2f128_pd(lo03, hi03, 0x31));
    const __m256d lo47 = _mm256_unpacklo_pd(ua47, ub47);
    const __m256d hi47 = _mm256_unpackhi_pd(ua47, ub47);
    _mm256_storeu_pd(out + 2 * b + 8, _mm256_permute2f128_pd(lo47, hi47, 0x20));
    _mm256_storeu_pd(out + 2 * b + 12, _mm256_permute2f128_pd(lo47, hi47, 0x31));
  }
  for (; b < nblocks; ++b) {
    const d::PhiloxBlock blk = d::philox_block(key, stream, block0 + b);
    out[2 * b] = d::u01_from_words(blk.x[0], blk.x[1]);
    out[2 * b + 1] = d::u01_from_words(blk.x[2], blk.x[3]);
  }
}

// ---- elementwise transforms ------------------------------------------------

inline __m256d vlog4(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i ebits = _mm256_srli_epi64(bits, 52);
  const __m256d ebiased = _mm256_sub_pd(
      _mm256_castsi256_pd(
          _mm256_or_si256(ebits, _mm256_set1_epi64x(0x4330000000000000LL))),
      _mm256_set1_pd(0x1p52));
  __m256d e = _mm256_sub_pd(ebiased, _mm256_set1_pd(1023.0));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FF0000000000000LL)));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(d::kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));
  const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(d::kLogPoly[6]);
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(d::kLogPoly[5]));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(d::kLogPoly[4]));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(d::kLogPoly[3]));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(d::kLogPoly[2]));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(d::kLogPoly[1]));
  p = _mm256_fmadd_pd(z, p, _mm256_set1_pd(d::kLogPoly[0]));
  const __m256d lnm = _mm256_fmadd_pd(_mm256_mul_pd(s, z), p,
                                      _mm256_mul_pd(_mm256_set1_pd(2.0), s));
  return _mm256_add_pd(
      _mm256_mul_pd(e, _mm256_set1_pd(d::kLn2Hi)),
      _mm256_add_pd(lnm, _mm256_mul_pd(e, _mm256_set1_pd(d::kLn2Lo))));
}

template <size_t N>
inline __m256d horner_fma(__m256d r, const double (&c)[N]) {
  __m256d acc = _mm256_set1_pd(c[N - 1]);
  for (size_t i = N - 1; i-- > 0;) {
    acc = _mm256_fmadd_pd(r, acc, _mm256_set1_pd(c[i]));
  }
  return acc;
}

inline __m256d rational_7_7_v(__m256d r, const double (&num)[8],
                              const double (&den)[7]) {
  const __m256d n = horner_fma(r, num);
  __m256d dd = horner_fma(r, den);
  dd = _mm256_fmadd_pd(r, dd, _mm256_set1_pd(1.0));
  return _mm256_div_pd(n, dd);
}

inline __m256d ppnd4(__m256d p) {
  const __m256d q = _mm256_sub_pd(p, _mm256_set1_pd(0.5));
  const __m256d absq = _mm256_and_pd(
      q, _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL)));
  const __m256d central =
      _mm256_cmp_pd(absq, _mm256_set1_pd(0.425), _CMP_LE_OQ);
  const __m256d r_c = _mm256_fnmadd_pd(q, q, _mm256_set1_pd(0.180625));
  const __m256d z_c = _mm256_mul_pd(q, rational_7_7_v(r_c, d::kNormA, d::kNormB));
  if (_mm256_movemask_pd(central) == 0xF) {
    return z_c;
  }
  // tail path, evaluated on every lane but kept only where |q| > 0.425
  const __m256d rmin =
      _mm256_min_pd(p, _mm256_sub_pd(_mm256_set1_pd(1.0), p));
  const __m256d t = _mm256_sqrt_pd(
      _mm256_xor_pd(vlog4(rmin), _mm256_set1_pd(-0.0)));
  const __m256d near = _mm256_cmp_pd(t, _mm256_set1_pd(5.0), _CMP_LE_OQ);
  const __m256d z_n =
      rational_7_7_v(_mm256_sub_pd(t, _mm256_set1_pd(1.6)), d::kNormC, d::kNormD);
  const __m256d z_f =
      rational_7_7_v(_mm256_sub_pd(t, _mm256_set1_pd(5.0)), d::kNormE, d::kNormF);
  __m256d z_t = _mm256_blendv_pd(z_f, z_n, near);
  const __m256d qneg = _mm256_cmp_pd(q, _mm256_setzero_pd(), _CMP_LT_OQ);
  z_t = _mm256_blendv_pd(z_t, _mm256_xor_pd(z_t, _mm256_set1_pd(-0.0)), qneg);
  return _mm256_blendv_pd(z_t, z_c, central);
}

void exp_from_u01_avx2(const double* u, double* out, size_t n, double scale) {
  const double negscale = -scale;
  const __m256d ns = _mm256_set1_pd(negscale);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vlog4(_mm256_loadu_pd(u + i)), ns));
  }
  for (; i < n; ++i) {
    out[i] = d::log_positive(u[i]) * negscale;
  }
}

void normal_from_u01_avx2(const double* u, double* out, size_t n, double mu,
                          double sigma) {
  const __m256d sg = _mm256_set1_pd(sigma);
  const __m256d muv = _mm256_set1_pd(mu);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z = ppnd4(_mm256_loadu_pd(u + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(sg, z, muv));
  }
  for (; i < n; ++i) {
    out[i] = std::fma(sigma, d::ppnd16(u[i]), mu);
  }
}

void log_array_avx2(const double* x, double* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, vlog4(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) {
    out[i] = d::log_positive(x[i]);
  }
}

// ---- reductions ------------------------------------------------------------

double sum_avx2(const double* x, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  const __m256d v = _mm256_add_pd(acc0, acc1);
  const __m128d t = _mm_add_pd(_mm256_castpd256_pd128(v),
                               _mm256_extractf128_pd(v, 1));
  double s = _mm_cvtsd_f64(t) + _mm_cvtsd_f64(_mm_unpackhi_pd(t, t));
  for (; i < n; ++i) {
    s += x[i];
  }
  return s;
}

double sum_sq_dev_avx2(const double* x, size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), c);
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  const __m256d v = _mm256_add_pd(acc0, acc1);
  const __m128d t = _mm_add_pd(_mm256_castpd256_pd128(v),
                               _mm256_extractf128_pd(v, 1));
  double s = _mm_cvtsd_f64(t) + _mm_cvtsd_f64(_mm_unpackhi_pd(t, t));
  for (; i < n; ++i) {
    const double dd = x[i] - center;
    s = std::fma(dd, dd, s);
  }
  return s;
}

void count_cells_avx2(const double* x, size_t n, const double* breaks,
                      size_t nbreaks, uint64_t* counts) {
  constexpr size_t kMaxBreaks = 15;
  if (nbreaks == 0 || nbreaks > kMaxBreaks) {
    scalar_kernels().count_cells(x, n, breaks, nbreaks, counts);
    return;
  }
  __m256d bv[kMaxBreaks];
  __m256i acc[kMaxBreaks];
  for (size_t j = 0; j < nbreaks; ++j) {
    bv[j] = _mm256_set1_pd(breaks[j]);
    acc[j] = _mm256_setzero_si256();
  }
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    for (size_t j = 0; j < nbreaks; ++j) {
      const __m256d m = _mm256_cmp_pd(xv, bv[j], _CMP_GT_OQ);
      acc[j] = _mm256_sub_epi64(acc[j], _mm256_castpd_si256(m));
    }
  }
  uint64_t gt[kMaxBreaks];
  for (size_t j = 0; j < nbreaks; ++j) {
    alignas(32) uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc[j]);
    gt[j] = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  }
  for (; i < n; ++i) {
    for (size_t j = 0; j < nbreaks; ++j) {
      gt[j] += (x[i] > breaks[j]) ? 1u : 0u;
    }
  }
  counts[0] = n - gt[0];
  for (size_t j = 1; j < nbreaks; ++j) {
    counts[j] = gt[j - 1] - gt[j];
  }
  counts[nbreaks] = gt[nbreaks - 1];
}

}  // namespace

bool avx2_available() noexcept {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const KernelTable& avx2_kernels() noexcept {
  static const KernelTable table = {
      fill_u01_avx2,  exp_from_u01_avx2, normal_from_u01_avx2,
      log_array_avx2, sum_avx2,          sum_sq_dev_avx2,
      count_cells_avx2, "avx2"};
  return table;
}

}  // namespace gof::simd

#else  // non-x86 builds fall back to the reference table

namespace gof::simd {

bool avx2_available() noexcept { return false; }

const KernelTable& avx2_kernels() noexcept { return scalar_kernels(); }

}  // namespace gof::simd

#endif
