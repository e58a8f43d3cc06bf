#ifndef OFFPOLICY_RANDOM_HPP_
#define OFFPOLICY_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace offpolicy {

/// Seed domains. Each consumer of a run seed mixes in its own tag so that the
/// trajectory, the feature map and the state-distribution estimate are drawn
/// from decorrelated generators even though they share one run seed.
enum class SeedDomain : std::uint64_t {
  kTrajectory = 0x7472616a65637479ULL,
  kFeatures = 0x6665617475726573ULL,
  kStateDistribution = 0x6d755f6265686176ULL,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, SeedDomain domain) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(domain)));
}

/// Thin wrapper over mt19937_64 with distribution helpers whose output is
/// fixed by this code rather than by the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return r % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace offpolicy

#endif  // OFFPOLICY_RANDOM_HPP_
