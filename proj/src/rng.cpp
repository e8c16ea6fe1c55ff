#include "apent/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>
#include <vector>

namespace apent::rng {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& ctr,
                       const std::array<std::uint32_t, 2>& key) {
  std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
  std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
  std::array<std::uint32_t, 4> out;
  out[0] = static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0];
  out[1] = static_cast<std::uint32_t>(p1);
  out[2] = static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1];
  out[3] = static_cast<std::uint32_t>(p0);
  ctr = out;
}

}  // namespace

std::array<std::uint32_t, 4> Philox::block(std::uint64_t seed,
                                           std::uint64_t stream,
                                           std::uint64_t index) {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                      static_cast<std::uint32_t>(seed >> 32)};
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    round_once(ctr, key);
  }
  return ctr;
}

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

void Philox::refill() {
  buffer_ = block(seed_, stream_, block_index_++);
  buffer_pos_ = 0;
}

std::uint32_t Philox::next_u32() {
  if (buffer_pos_ == 4) refill();
  return buffer_[buffer_pos_++];
}

std::uint64_t Philox::next_u64() {
  std::uint64_t lo = next_u32();
  std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double Philox::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // 1 - u keeps the argument of log strictly positive.
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

std::complex<double> Philox::complex_normal() {
  double re = normal();
  double im = normal();
  return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("APENT_THREADS")) {
    int requested = std::atoi(cap);
    if (requested >= 1 && requested < n) n = requested;
  }
  return n;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace apent::rng
