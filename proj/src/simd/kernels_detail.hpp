#pragma once

// Building blocks shared by the scalar and SIMD kernel variants. The SIMD
// variants mirror these operation-for-operation (every add/mul/div/sqrt/fma in
// the same order), which is what makes the tables bit-compatible: IEEE-754
// basic operations and fma are correctly rounded, so identical operation
// sequences give identical bits on every conforming host.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace gof::simd::detail {

// ---------------------------------------------------------------------------
// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3",
// SC 2011). Counter-based: stream and position are addressed directly, so any
// trial's substream can be regenerated O(1) by any worker.
// ---------------------------------------------------------------------------

inline constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

struct PhiloxBlock {
  uint32_t x[4];
};

inline PhiloxBlock philox_block(uint64_t key, uint64_t stream,
                                uint64_t block) noexcept {
  uint32_t c0 = static_cast<uint32_t>(block);
  uint32_t c1 = static_cast<uint32_t>(block >> 32);
  uint32_t c2 = static_cast<uint32_t>(stream);
  uint32_t c3 = static_cast<uint32_t>(stream >> 32);
  uint32_t k0 = static_cast<uint32_t>(key);
  uint32_t k1 = static_cast<uint32_t>(key >> 32);
  for (int r = 0; r < 10; ++r) {
    if (r != 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    const uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * c0;
    const uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * c2;
    const uint32_t n0 = static_cast<uint32_t>(p1 >> 32) ^ c1 ^ k0;
    const uint32_t n1 = static_cast<uint32_t>(p1);
    const uint32_t n2 = static_cast<uint32_t>(p0 >> 32) ^ c3 ^ k1;
    const uint32_t n3 = static_cast<uint32_t>(p0);
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
  }
  return {{c0, c1, c2, c3}};
}

// 52 random bits -> (0,1), never exactly 0 or 1; every step is exact.
inline double u01_from_words(uint32_t lo, uint32_t hi) noexcept {
  const uint64_t v = (static_cast<uint64_t>(hi) << 32) | lo;
  return static_cast<double>(v >> 12) * 0x1p-52 + 0x1p-53;
}

// ---------------------------------------------------------------------------
// Natural log for finite positive normal doubles. Decomposition
// x = 2^e * m with m in (sqrt(1/2), sqrt(2)], then ln(m) = 2s + s^3*P(s^2)
// with s = (m-1)/(m+1). P is a degree-6 minimax fit on s^2 in [0, 0.02944]
// (max fit error 3.2e-16, giving < 5e-18 relative error in ln m); measured
// total error is below 1.5 ulp over (0,1).
// ---------------------------------------------------------------------------

inline constexpr double kLogPoly[7] = {
    0.66666666666666696862,  0.3999999999989950449, 0.28571428625975484921,
    0.22222211134795079855,  0.1818288912526172208, 0.15331721600556041269,
    0.1461644968504340586};
inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kLn2Hi = 0x1.62e42fee00000p-1;
inline constexpr double kLn2Lo = 0x1.a39ef35793c76p-33;

inline double log_positive(double x) noexcept {
  const uint64_t bits = std::bit_cast<uint64_t>(x);
  double e = static_cast<double>(static_cast<int64_t>(bits >> 52)) - 1023.0;
  double m = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) |
                                   0x3FF0000000000000ull);
  if (m > kSqrt2) {
    m *= 0.5;
    e += 1.0;
  }
  const double f = m - 1.0;
  const double s = f / (2.0 + f);
  const double z = s * s;
  double p = kLogPoly[6];
  p = std::fma(z, p, kLogPoly[5]);
  p = std::fma(z, p, kLogPoly[4]);
  p = std::fma(z, p, kLogPoly[3]);
  p = std::fma(z, p, kLogPoly[2]);
  p = std::fma(z, p, kLogPoly[1]);
  p = std::fma(z, p, kLogPoly[0]);
  const double lnm = std::fma(s * z, p, 2.0 * s);
  return e * kLn2Hi + (lnm + e * kLn2Lo);
}

// ---------------------------------------------------------------------------
// Inverse standard normal CDF, Wichura's algorithm AS 241 (PPND16). Relative
// accuracy ~1e-16 over (0,1); the tail branch reuses log_positive so both
// kernel variants share one log.
// ---------------------------------------------------------------------------

inline constexpr double kNormA[8] = {
    3.3871328727963666080e0,  1.3314166789178437745e2,
    1.9715909503065514427e3,  1.3731693765509461125e4,
    4.5921953931549871457e4,  6.7265770927008700853e4,
    3.3430575583588128105e4,  2.5090809287301226727e3};
inline constexpr double kNormB[7] = {
    4.2313330701600911252e1,  6.8718700749205790830e2,
    5.3941960214247511077e3,  2.1213794301586595867e4,
    3.9307895800092710610e4,  2.8729085735721942674e4,
    5.2264952788528545610e3};
inline constexpr double kNormC[8] = {
    1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0,
    1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
inline constexpr double kNormD[7] = {
    2.05319162663775882187e0, 1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1,
    1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9};
inline constexpr double kNormE[8] = {
    6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double kNormF[7] = {
    5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4,
    1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15};

inline double rational_7_7(double r, const double (&num)[8],
                           const double (&den)[7]) noexcept {
  double n = num[7];
  n = std::fma(r, n, num[6]);
  n = std::fma(r, n, num[5]);
  n = std::fma(r, n, num[4]);
  n = std::fma(r, n, num[3]);
  n = std::fma(r, n, num[2]);
  n = std::fma(r, n, num[1]);
  n = std::fma(r, n, num[0]);
  double d = den[6];
  d = std::fma(r, d, den[5]);
  d = std::fma(r, d, den[4]);
  d = std::fma(r, d, den[3]);
  d = std::fma(r, d, den[2]);
  d = std::fma(r, d, den[1]);
  d = std::fma(r, d, den[0]);
  d = std::fma(r, d, 1.0);
  return n / d;
}

inline double ppnd16(double p) noexcept {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = std::fma(-q, q, 0.180625);
    return q * rational_7_7(r, kNormA, kNormB);
  }
  const double rmin = std::min(p, 1.0 - p);
  const double t = std::sqrt(-log_positive(rmin));
  double z;
  if (t <= 5.0) {
    z = rational_7_7(t - 1.6, kNormC, kNormD);
  } else {
    z = rational_7_7(t - 5.0, kNormE, kNormF);
  }
  return q < 0.0 ? -z : z;
}

}  // namespace gof::simd::detail
