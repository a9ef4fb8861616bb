#pragma once

#include <cstdint>
#include <random>

namespace wmrs {

// SplitMix64 finalizer, used to mix (seed, tag) pairs into substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Every random stream in the library is seeded as derive_seed(parent, tag),
// so a stream's draws never depend on how much randomness a sibling consumed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag));
}

// Deterministic random stream. Draws are produced from raw mt19937_64 output
// only (no std distributions), so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., n-1}.
  int next_index(int n) {
    using u128 = unsigned __int128;
    return static_cast<int>((static_cast<u128>(next_u64()) * static_cast<u128>(n)) >> 64);
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Child stream derived from this stream's seed, independent of its state.
  Rng fork(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace wmrs
