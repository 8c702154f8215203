#pragma once

#include <cstdint>
#include <span>

namespace gof {

// Uniform(0,1) stream backed by the counter-based Philox kernels. Stream id k
// under a given seed is an independent substream that any worker can construct
// in O(1), so per-trial streams make simulation results worker-count
// invariant. Not for concurrent use by multiple threads; give each trial its
// own instance.
class RandomStream {
 public:
  RandomStream(uint64_t seed, uint64_t stream_id) noexcept
      : key_(seed), stream_(stream_id) {}

  double next_u01();
  void fill_u01(std::span<double> out);

  uint64_t seed() const noexcept { return key_; }
  uint64_t stream_id() const noexcept { return stream_; }

 private:
  uint64_t key_;
  uint64_t stream_;
  uint64_t next_block_ = 0;
  double buf_[2] = {0.0, 0.0};
  int buf_pos_ = 2;
};

}  // namespace gof
