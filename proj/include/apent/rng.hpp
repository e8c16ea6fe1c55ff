#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>

namespace apent::rng {

// Counter-based Philox4x32-10 generator (constants of the reference
// implementation).  State is (key = seed, stream, 64-bit block counter), so
// any (seed, stream) pair yields an independent reproducible stream and
// parallel runs can hand each task its own stream without coordination.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double uniform01();
  // Standard normal via Box-Muller (pairs are generated and cached).
  double normal();
  // Standard complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // One 128-bit block for a given block index; exposed for known-answer
  // tests against the reference constants.
  static std::array<std::uint32_t, 4> block(std::uint64_t seed,
                                            std::uint64_t stream,
                                            std::uint64_t index);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // forces a refill on first use
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Number of worker threads to use: hardware concurrency capped by the
// APENT_THREADS environment variable when set.
int worker_count();

// Runs fn(0..count-1), partitioned statically over worker threads.  Each
// index must touch only its own output slot; results are then independent of
// the scheduling and equal to a serial run.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace apent::rng
