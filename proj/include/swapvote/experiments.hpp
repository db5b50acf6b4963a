#pragma once

// Synthetic evaluation of the learning and summarization steps.
//
// Every run derives its generator from (master_seed, run index), and results
// are stored by run index, so curves do not depend on thread scheduling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "swapvote/learning.hpp"
#include "swapvote/profile.hpp"
#include "swapvote/rng.hpp"

namespace swapvote {

enum class ProfileSampling {
  // Each voter's profile estimated from its own equal share of samples.
  kPerVoter,
  // Each sample draws a voter uniformly, then a ranking from that voter.
  kVoterUniform,
};

struct SyntheticConfig {
  std::size_t d = 10;
  std::size_t n_voters = 20;
  std::size_t alt_per_instance = 5;
  std::size_t n_test_instances = 100;
  std::size_t n_runs = 50;
  // x axis of the learning curve.
  std::vector<std::size_t> comparisons_grid = {10, 20, 30, 40, 50,
                                               60, 70, 80, 90, 100};
  // x axis of the summarization curve.
  std::vector<std::size_t> voters_grid = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
  // Rankings sampled per instance to estimate the mean profile.
  std::size_t profile_sample_count = 10000;
  ProfileSampling sampling = ProfileSampling::kPerVoter;
  std::uint64_t master_seed = 1;
  FitConfig fit;
  // 0 = std::thread::hardware_concurrency().
  unsigned threads = 0;

  // Throws DomainError if a count or grid entry is zero, a grid is empty or
  // alt_per_instance < 2.
  void validate() const;
};

struct AccuracyCurve {
  std::vector<double> x_values;
  std::vector<double> mean_accuracy;
  // Across runs; binomial over instances when there is a single run.
  std::vector<double> standard_error;
  // per_run[r][i] is run r's accuracy at x_values[i].
  std::vector<std::vector<double>> per_run;
};

struct Population {
  std::vector<double> mean;
  std::vector<std::vector<double>> betas;
};

// m_j ~ U(-1, 1) once, then n_voters draws beta_i ~ Normal(m, I_d).
Population gen_population(std::size_t d, std::size_t n_voters, Rng& rng);
Population gen_population(const SyntheticConfig& config, Rng& rng);

// x, z ~ Normal(0, I_d); utilities ~ Normal(beta.x, 1/2); the higher
// sampled utility is the chosen side.
std::vector<PairwiseComparison> gen_voter_comparisons(
    std::span<const double> beta, std::size_t n, Rng& rng);

// m alternatives with features ~ Normal(0, I_d). Ids are zero-padded so id
// order matches index order.
std::vector<Alternative> gen_instance(std::size_t d, std::size_t m, Rng& rng);

// Borda winner of the sampled mean profile of `betas` over `alternatives`
// (index into `alternatives`). Ties go to the smallest id.
std::size_t ground_truth_winner(std::span<const std::vector<double>> betas,
                                std::span<const Alternative> alternatives,
                                std::size_t n_samples, Rng& rng,
                                ProfileSampling sampling = ProfileSampling::kPerVoter);

// Same estimate from precomputed mode utilities, modes[i][a] = beta_i.x_a.
// Alternatives are assumed to be in id order.
std::size_t ground_truth_winner_from_modes(
    std::span<const std::vector<double>> modes, std::size_t n_samples,
    Rng& rng, ProfileSampling sampling);

// Learning-curve: winners with true vs fitted parameters, per comparison count.
AccuracyCurve eval_step2(const SyntheticConfig& config);

// Summarization curve: decide(mean beta) vs ground truth, per voter count.
AccuracyCurve eval_step3(const SyntheticConfig& config);

struct MoralMachineConfig {
  std::size_t n_voters = 10000;
  std::vector<std::size_t> alternatives_grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t n_test_instances = 3000;
  std::size_t profile_sample_count = 10000;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;

  // Throws DomainError on a zero count, an empty grid or a grid entry < 2.
  void validate() const;
};

// Random Moral-Machine-style alternative: 1..5 characters of random types,
// random relation; legality only for pedestrians.
Alternative gen_mm_alternative(std::size_t index, Rng& rng);

// Summarization accuracy on a synthetic population over encoded
// Moral-Machine alternatives, sampling voter-then-ranking for the ground
// truth, as the number of alternatives grows.
AccuracyCurve eval_mm_step3(const MoralMachineConfig& config);

// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace swapvote
