#pragma once

#include <cstdint>

namespace rpm3 {

/// SplitMix64 step; used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent 64-bit seed for substream (domain, index) of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t index);

/// Stream domains used by the simulators. Adding a domain never perturbs existing streams.
namespace stream {
inline constexpr std::uint64_t kWorker = 1;    ///< per-worker service times
inline constexpr std::uint64_t kProtocol = 2;  ///< masks R/S and Fountain specs
inline constexpr std::uint64_t kData = 3;      ///< input matrices A, B
inline constexpr std::uint64_t kBaseline = 4;  ///< KES / load-balancing draws
}  // namespace stream

/**
 * xoshiro256** generator.
 *
 * Draw order conventions: uniform_below() consumes one or more next_u64()
 * values by rejection; uniform01() and exponential() consume exactly one.
 */
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t master, std::uint64_t domain, std::uint64_t index)
      : Rng(derive_seed(master, domain, index)) {}

  std::uint64_t next_u64();
  std::uint64_t operator()() { return next_u64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  /// Exponential variate by inverse CDF: -ln(1 - U) / rate.
  double exponential(double rate);

 private:
  std::uint64_t s_[4];
};

}  // namespace rpm3
