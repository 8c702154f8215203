#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include <doctest.h>

#include "gof/simd/kernels.hpp"
#include "simd/kernels_detail.hpp"
#include "test_util.hpp"

using namespace gof;
using gof::test::rel_diff;
using gof::test::ulps_between;

namespace {

const std::vector<size_t> kSizes = {0,  1,  2,  3,   5,   7,    8,   9,
                                    15, 16, 17, 100, 255, 1000, 1001};

std::vector<double> blocks_to_doubles(const simd::KernelTable& k, uint64_t key,
                                      uint64_t stream, uint64_t block0,
                                      uint64_t nblocks) {
  std::vector<double> out(2 * nblocks);
  k.fill_u01(key, stream, block0, nblocks, out.data());
  return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("philox known-answer vectors") {
  // Published vectors for philox4x32, 10 rounds: zero counter/key, all ones,
  // and the pi-digits pattern.
  using gof::simd::detail::philox_block;
  {
    const auto b = philox_block(0, 0, 0);
    CHECK(b.x[0] == 0x6627e8d5u);
    CHECK(b.x[1] == 0xe169c58du);
    CHECK(b.x[2] == 0xbc57ac4cu);
    CHECK(b.x[3] == 0x9b00dbd8u);
  }
  {
    const auto b = philox_block(0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFFFFFFFFFull,
                                0xFFFFFFFFFFFFFFFFull);
    CHECK(b.x[0] == 0x408f276du);
    CHECK(b.x[1] == 0x41c83b0eu);
    CHECK(b.x[2] == 0xa20bc7c6u);
    CHECK(b.x[3] == 0x6d5451fdu);
  }
  {
    const auto b = philox_block(0x299f31d0a4093822ull, 0x0370734413198a2eull,
                                0x85a308d3243f6a88ull);
    CHECK(b.x[0] == 0xd16cfe09u);
    CHECK(b.x[1] == 0x94fdccebu);
    CHECK(b.x[2] == 0x5001e420u);
    CHECK(b.x[3] == 0x24126ea1u);
  }
}

TEST_CASE("fill_u01 stays strictly inside (0,1) and addresses blocks") {
  const auto& k = simd::scalar_kernels();
  const auto a = blocks_to_doubles(k, 42, 7, 0, 5000);
  for (double u : a) {
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a == blocks_to_doubles(k, 42, 7, 0, 5000));
  CHECK(a != blocks_to_doubles(k, 42, 8, 0, 5000));
  const auto window = blocks_to_doubles(k, 42, 7, 100, 10);
  for (size_t i = 0; i < window.size(); ++i) {
    CHECK(window[i] == a[200 + i]);
  }
}

TEST_CASE("scalar and avx2 variants agree bit-for-bit") {
  if (!simd::avx2_available()) {
    MESSAGE("avx2 unavailable on this host; equivalence suite skipped");
    return;
  }
  const auto& s = simd::scalar_kernels();
  const auto& v = simd::avx2_kernels();

  SUBCASE("fill_u01") {
    for (uint64_t nblocks : {0u, 1u, 3u, 7u, 8u, 9u, 17u, 64u, 501u}) {
      const auto a = blocks_to_doubles(s, 123, 456, 9, nblocks);
      const auto b = blocks_to_doubles(v, 123, 456, 9, nblocks);
      REQUIRE(a == b);
    }
  }
  SUBCASE("exp_from_u01") {
    for (size_t n : kSizes) {
      const auto u = gof::test::uniform_values(n, 1);
      std::vector<double> a(n), b(n);
      s.exp_from_u01(u.data(), a.data(), n, 0.7315);
      v.exp_from_u01(u.data(), b.data(), n, 0.7315);
      REQUIRE(a == b);
    }
  }
  SUBCASE("normal_from_u01") {
    for (size_t n : kSizes) {
      auto u = gof::test::uniform_values(n, 2);
      if (n >= 8) {
        // force both tail branches and the central/tail boundary
        u[0] = 1e-9;
        u[1] = 1.0 - 1e-9;
        u[2] = 1e-14;
        u[3] = 0.0251;
        u[4] = 0.9812;
        u[5] = 0.075;
      }
      std::vector<double> a(n), b(n);
      s.normal_from_u01(u.data(), a.data(), n, -0.25, 1.75);
      v.normal_from_u01(u.data(), b.data(), n, -0.25, 1.75);
      REQUIRE(a == b);
    }
  }
  SUBCASE("log_array") {
    for (size_t n : kSizes) {
      const auto u = gof::test::uniform_values(n, 3);
      std::vector<double> a(n), b(n);
      s.log_array(u.data(), a.data(), n);
      v.log_array(u.data(), b.data(), n);
      REQUIRE(a == b);
    }
  }
  SUBCASE("sum and sum_sq_dev") {
    for (size_t n : kSizes) {
      const auto u = gof::test::uniform_values(n, 4);
      REQUIRE(s.sum(u.data(), n) == v.sum(u.data(), n));
      REQUIRE(s.sum_sq_dev(u.data(), n, 0.3125) ==
              v.sum_sq_dev(u.data(), n, 0.3125));
    }
  }
  SUBCASE("count_cells") {
    const double breaks[3] = {0.25, 0.5, 0.75};
    for (size_t n : kSizes) {
      if (n == 0) {
        continue;
      }
      auto u = gof::test::uniform_values(n, 5);
      u[0] = 0.25;  // boundary value
      for (size_t nb = 1; nb <= 3; ++nb) {
        std::vector<uint64_t> a(nb + 1), b(nb + 1);
        s.count_cells(u.data(), n, breaks, nb, a.data());
        v.count_cells(u.data(), n, breaks, nb, b.data());
        REQUIRE(a == b);
      }
    }
  }
}

TEST_CASE("log kernel matches libm within a few ulps") {
  const auto& k = simd::active_kernels();
  auto u = gof::test::uniform_values(20000, 6);
  u.insert(u.end(), {0x1p-53, 1.0 - 0x1p-53, 0.5, 1.0 / 3.0, 0.7071067811865475});
  std::vector<double> out(u.size());
  k.log_array(u.data(), out.data(), u.size());
  double worst = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    worst = std::max(worst, ulps_between(out[i], std::log(u[i])));
  }
  CHECK(worst <= 4.0);
}

TEST_CASE("normal transform round-trips through the normal cdf") {
  const auto& k = simd::active_kernels();
  auto u = gof::test::uniform_values(20000, 7);
  u.insert(u.end(),
           {1e-12, 1e-9, 1e-6, 0.425, 0.4251, 0.5, 0.99999, 1.0 - 1e-12});
  std::vector<double> z(u.size());
  k.normal_from_u01(u.data(), z.data(), u.size(), 0.0, 1.0);
  double worst = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    const double back = 0.5 * std::erfc(-z[i] * 0.70710678118654752440);
    worst = std::max(worst, std::fabs(back - u[i]));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("sum kernels match a long-double reference") {
  const auto& k = simd::active_kernels();
  for (size_t n : kSizes) {
    const auto u = gof::test::uniform_values(n, 8);
    long double ref = 0.0L;
    long double ref2 = 0.0L;
    for (double x : u) {
      ref += x;
      const long double d = static_cast<long double>(x) - 0.25L;
      ref2 += d * d;
    }
    CHECK(rel_diff(k.sum(u.data(), n), static_cast<double>(ref)) <= 1e-13);
    if (n > 0) {
      CHECK(rel_diff(k.sum_sq_dev(u.data(), n, 0.25),
                     static_cast<double>(ref2)) <= 1e-13);
    }
  }
}

TEST_CASE("count_cells matches a naive count and conserves totals") {
  const auto& k = simd::active_kernels();
  const std::vector<double> breaks = {0.2, 0.4, 0.6, 0.8};
  auto u = gof::test::uniform_values(999, 9);
  u[10] = 0.4;
  u[11] = 0.8;
  std::vector<uint64_t> counts(breaks.size() + 1);
  k.count_cells(u.data(), u.size(), breaks.data(), breaks.size(),
                counts.data());
  std::vector<uint64_t> naive(breaks.size() + 1, 0);
  for (double x : u) {
    size_t idx = 0;
    while (idx < breaks.size() && x > breaks[idx]) {
      ++idx;
    }
    ++naive[idx];
  }
  CHECK(counts == naive);
  uint64_t total = 0;
  for (uint64_t c : counts) {
    total += c;
  }
  CHECK(total == u.size());
}

TEST_CASE("kernel selection") {
  gof::test::KernelGuard guard;
  simd::select_kernels("scalar");
  CHECK(std::string_view(simd::active_kernels().name) == "scalar");
  simd::select_kernels("auto");
  CHECK_THROWS_AS(simd::select_kernels("sse9"), std::invalid_argument);
  if (simd::avx2_available()) {
    simd::select_kernels("avx2");
    CHECK(std::string_view(simd::active_kernels().name) == "avx2");
  }
}

}  // TEST_SUITE
