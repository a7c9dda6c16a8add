#pragma once

#include <cmath>
#include <cstdint>

namespace cntpuf {

// Deterministic seed derivation and sampling. Every operation that consumes
// randomness takes an explicit 64-bit seed; child streams are derived with
// derive_seed(), so two runs of the same scenario are bit-identical and any
// sub-stream can be re-created without replaying the others.
//
// Split rules used across the project (all documented here so they can be
// re-derived independently):
//   crossbar cell (r, c):        derive_seed(derive_seed(build_seed, r), c)
//   repetition k of cell (r, c): derive_seed(derive_seed(measure_seed, r * n_cols + c), k)
//   per-cell noise draws inside one evaluation:
//                                derive_seed(derive_seed(noise_seed, r), c)
//   scenario streams:            derive_seed(master_seed, kSeedStream*)

inline constexpr std::uint64_t kSeedStreamCrossbar = 1;
inline constexpr std::uint64_t kSeedStreamReadout = 2;
inline constexpr std::uint64_t kSeedStreamEnroll = 3;
inline constexpr std::uint64_t kSeedStreamAttack = 4;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives an independent child seed for a numbered sub-stream.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ (0x9E3779B97F4A7C15ull * (stream + 0x632BE59BD9B4E019ull)));
}

// Small deterministic PRNG (SplitMix64 sequence). Not cryptographic; used
// for Monte-Carlo draws only. The same seed yields the same sequence on
// every platform: no standard-library distributions are involved.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi].
  double next_uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_double();
  }

  // Log-uniform in [lo, hi]; requires lo > 0 unless lo == hi. A degenerate
  // range returns the bound itself but still consumes one draw so sequences
  // stay aligned.
  double next_log_uniform(double lo, double hi) noexcept {
    const double u = next_double();
    if (lo == hi) return lo;
    return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per draw.
  double next_normal() noexcept {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.28318530717958647692528676655900577 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace cntpuf
