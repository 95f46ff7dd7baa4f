#pragma once

#include <cmath>
#include <cstdint>

namespace quantreg {

// Counter-based random stream. Value i of stream (seed, stream_id) is
//
//   mix(key + (i+1) * 0x9E3779B97F4A7C15)      key = mix(seed ^ mix(stream_id))
//
// with mix the SplitMix64 finalizer. Any value is addressable by its counter,
// so disjoint streams (or counter ranges) can be filled independently and the
// raw uniform stream can be recorded and replayed elsewhere.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : key_(mix(seed ^ mix(stream_id))) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ull);
  }

  // uniform on [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; consumes two counter values
  double normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  void skip(std::uint64_t n) { counter_ += n; }
  std::uint64_t counter() const { return counter_; }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace quantreg
