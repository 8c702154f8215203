#include "gof/rng.hpp"

#include "gof/simd/kernels.hpp"

namespace gof {

double RandomStream::next_u01() {
  if (buf_pos_ == 2) {
    simd::active_kernels().fill_u01(key_, stream_, next_block_, 1, buf_);
    ++next_block_;
    buf_pos_ = 0;
  }
  return buf_[buf_pos_++];
}

void RandomStream::fill_u01(std::span<double> out) {
  size_t i = 0;
  const size_t n = out.size();
  while (buf_pos_ < 2 && i < n) {
    out[i++] = buf_[buf_pos_++];
  }
  const uint64_t whole = (n - i) / 2;
  if (whole != 0) {
    simd::active_kernels().fill_u01(key_, stream_, next_block_, whole,
                                    out.data() + i);
    next_block_ += whole;
    i += 2 * whole;
  }
  if (i < n) {
    simd::active_kernels().fill_u01(key_, stream_, next_block_, 1, buf_);
    ++next_block_;
    buf_pos_ = 0;
    out[i] = buf_[buf_pos_++];
  }
}

}  // namespace gof
