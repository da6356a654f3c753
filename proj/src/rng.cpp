#include "rpm3/rng.hpp"

#include <cmath>

#include "rpm3/error.hpp"

namespace rpm3 {

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t index) {
  std::uint64_t st = master;
  std::uint64_t h = splitmix64(st);
  st = h ^ (domain * 0xd1b54a32d192ed03ULL);
  h = splitmix64(st);
  st = h ^ (index * 0x8cb92ba72f3d8dd7ULL);
  return splitmix64(st);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t st = seed;
  for (auto& w : s_) w = splitmix64(st);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) fail(Errc::InvalidArgument, "uniform_below(0)");
  // Reject the short top segment so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::exponential(double rate) {
  if (!(rate > 0)) fail(Errc::InvalidArgument, "exponential rate must be positive");
  return -std::log1p(-uniform01()) / rate;
}

}  // namespace rpm3
