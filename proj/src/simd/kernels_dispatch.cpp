#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gof/simd/kernels.hpp"

namespace gof::simd {
namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable& hardware_default() noexcept {
  return avx2_available() ? avx2_kernels() : scalar_kernels();
}

const KernelTable& pick_default() noexcept {
  if (const char* env = std::getenv("GOF_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") {
      return scalar_kernels();
    }
    if (v == "avx2") {
      if (avx2_available()) {
        return avx2_kernels();
      }
      std::fprintf(stderr,
                   "gof: GOF_KERNELS=avx2 unsupported on this host; "
                   "using scalar kernels\n");
      return scalar_kernels();
    }
    if (!v.empty() && v != "auto") {
      std::fprintf(stderr, "gof: ignoring unknown GOF_KERNELS value '%s'\n",
                   env);
    }
  }
  return hardware_default();
}

}  // namespace

const KernelTable& active_kernels() noexcept {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = &pick_default();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void select_kernels(std::string_view name) {
  if (name == "scalar") {
    g_active.store(&scalar_kernels(), std::memory_order_release);
  } else if (name == "avx2") {
    if (!avx2_available()) {
      throw std::runtime_error("avx2 kernels are not supported on this host");
    }
    g_active.store(&avx2_kernels(), std::memory_order_release);
  } else if (name == "auto") {
    g_active.store(&hardware_default(), std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel variant '" + std::string(name) +
                                "' (expected scalar, avx2, or auto)");
  }
}

}  // namespace gof::simd
