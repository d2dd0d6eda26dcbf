#pragma once

#include <cstdint>

namespace isocube {

// Counter-based generator: the k-th output is a pure function of (key, k),
// so streams are reproducible across machines and splittable without
// shared state. The mixer is the 64-bit finalizer from MurmurHash3 applied
// to key + k * golden-ratio increment (the SplitMix64 construction).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : key_(seed), counter_(counter) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on (lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_open01();
  }

  // Independent stream derived from this key; does not advance this one.
  CounterRng split(std::uint64_t stream) const {
    return CounterRng(mix(key_ ^ mix(stream + kGolden)));
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace isocube
