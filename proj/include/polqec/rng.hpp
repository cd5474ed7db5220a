#ifndef POLQEC_RNG_HPP
#define POLQEC_RNG_HPP

#include <cstdint>
#include <random>

namespace polqec {

/// SplitMix64 step: advances `state` and returns the next output word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the independent stream `index` under `master`. Stable across
/// platforms and thread counts: trial i always sees the same stream.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = master ^ (index * 0xD1342543DE82EF95ULL + 0x632BE59BD9B4E019ULL);
  return a ^ splitmix64(s);
}

/// Engine for one Monte Carlo trial, decoupled from every other trial.
inline std::mt19937_64 make_trial_rng(std::uint64_t master, std::uint64_t index) {
  return std::mt19937_64(derive_stream_seed(master, index));
}

/// 53-bit uniform draw in [0, 1). Hand-rolled (one engine word per draw) so
/// sampled values are reproducible across standard-library implementations.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace polqec

#endif  // POLQEC_RNG_HPP
