#pragma once

#include <cstdint>
#include <random>

namespace swapvote {

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t value);

// Child seed for stream `index` under `parent`. Distinct indices give
// statistically independent streams; the mapping is fixed across platforms.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

// Seedable, splittable generator. Every stochastic operation in the library
// takes one of these explicitly; there is no global random state.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed);

  // Independent generator for sub-stream `index`. Does not advance *this.
  Rng split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  double normal(double mean, double stddev);
  // Gumbel (max) with location `loc` and scale `scale`.
  double gumbel(double loc, double scale);
  double uniform(double lo, double hi);
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> standard_normal_{0.0, 1.0};
  std::extreme_value_distribution<double> standard_gumbel_{0.0, 1.0};
};

}  // namespace swapvote
