#pragma once

#include <cstdint>

#include "fractalkit/error.hpp"

namespace fractalkit {

/// SplitMix64 stream. Bit-identical to the published reference generator.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// next_u64 / 2^64 truncated to the 53 bits a double can hold; always < 1.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// next_u64 mod n.
  std::uint64_t next_choice(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("next_choice: n must be >= 1");
    return next_u64() % n;
  }

  /// Independent child stream seeded with this stream's next output.
  RandomStream split() { return RandomStream(next_u64()); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Per-task stream for task `index` under a master seed.
inline RandomStream derived_stream(std::uint64_t master_seed, std::uint64_t index) {
  RandomStream mixer(master_seed + index);
  return RandomStream(mixer.next_u64());
}

}  // namespace fractalkit
