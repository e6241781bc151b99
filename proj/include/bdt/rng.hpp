#pragma once

#include <cstdint>

namespace bdt {

// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t DeriveSeed(std::uint64_t base_seed,
                                   std::uint64_t index) {
  return Mix64(Mix64(base_seed) ^ Mix64(index + 0x632be59bd9b4e019ULL));
}

// xoshiro256** seeded through SplitMix64. Bit-for-bit reproducible across
// platforms, unlike the <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      s = Mix64(x);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = Rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, bound) by multiply-shift. No rejection loop; the bias is
  // at most bound / 2^64.
  std::uint64_t Uniform(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  int UniformInt(int bound) {
    return static_cast<int>(Uniform(static_cast<std::uint64_t>(bound)));
  }

  // Uniform in [0, 1).
  double Real() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return Real() < p; }

  Rng Split(std::uint64_t index) const {
    return Rng(DeriveSeed(state_[0] ^ Rotl(state_[2], 13), index));
  }

 private:
  static constexpr std::uint64_t Rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace bdt
