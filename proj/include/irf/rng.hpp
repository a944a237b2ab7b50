#pragma once

#include <cstdint>
#include <random>

namespace irf {

// SplitMix64 finalizer. Used only to derive substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

// Deterministic 64-bit generator: std::mt19937_64 (fully specified by the
// standard) with an explicit bits-to-double conversion, so streams are
// identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Substream for trial `trial` of an experiment keyed by `master`. The
  // optional `stream` separates independent sequences inside one trial.
  static Rng for_trial(std::uint64_t master, std::uint64_t trial, std::uint64_t stream = 0) {
    return Rng(mix_seed(mix_seed(master, trial), stream));
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace irf
