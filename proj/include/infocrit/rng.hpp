#ifndef INFOCRIT_RNG_HPP
#define INFOCRIT_RNG_HPP

#include <cstdint>
#include <random>

namespace infocrit {

/// SplitMix64 output function (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream `index` of `master`. Streams derived this way do not
/// depend on the order in which they are consumed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

inline double standard_normal(Engine& eng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(eng);
}

inline double chi_squared(Engine& eng, double dof) {
  std::chi_squared_distribution<double> dist(dof);
  return dist(eng);
}

inline double uniform01(Engine& eng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(eng);
}

}  // namespace infocrit

#endif  // INFOCRIT_RNG_HPP
