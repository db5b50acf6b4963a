#include "swapvote/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "swapvote/errors.hpp"
#include "swapvote/moral_machine.hpp"
#include "swapvote/pipeline.hpp"
#include "swapvote/processes.hpp"

namespace swapvote {

namespace {

// Fixed sub-stream indices under each run's generator.
enum Stream : std::uint64_t {
  kPopulationStream = 0,
  kInstanceStream = 1,
  kComparisonStream = 2,
  kTrueWinnerStream = 3,
  kModelWinnerStream = 4,
};

std::string padded_id(std::size_t index, std::size_t count) {
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::string digits = std::to_string(index);
  return "a" + std::string(width - digits.size(), '0') + digits;
}

std::vector<std::vector<double>> modes_for(
    std::span<const std::vector<double>> betas,
    std::span<const Alternative> alternatives) {
  std::vector<std::vector<double>> modes(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    modes[i].reserve(alternatives.size());
    for (const Alternative& x : alternatives) {
      if (x.features.size() != betas[i].size()) {
        throw DomainError("voter and alternative dimensions differ");
      }
      modes[i].push_back(std::inner_product(betas[i].begin(), betas[i].end(),
                                            x.features.begin(), 0.0));
    }
  }
  return modes;
}

void check_grid(const std::vector<std::size_t>& grid, const char* name) {
  if (grid.empty()) throw DomainError(std::string(name) + " is empty");
  for (std::size_t v : grid) {
    if (v == 0) throw DomainError(std::string(name) + " has a zero entry");
  }
}

void fill_statistics(AccuracyCurve& curve, std::size_t instances) {
  const std::size_t runs = curve.per_run.size();
  const std::size_t points = curve.x_values.size();
  curve.mean_accuracy.assign(points, 0.0);
  curve.standard_error.assign(points, 0.0);
  for (std::size_t i = 0; i < points; ++i) {
    double sum = 0.0;
    for (const auto& run : curve.per_run) sum += run[i];
    const double mean = sum / static_cast<double>(runs);
    curve.mean_accuracy[i] = mean;
    if (runs >= 2) {
      double ss = 0.0;
      for (const auto& run : curve.per_run) ss += (run[i] - mean) * (run[i] - mean);
      curve.standard_error[i] =
          std::sqrt(ss / static_cast<double>(runs - 1) / static_cast<double>(runs));
    } else {
      curve.standard_error[i] =
          std::sqrt(mean * (1.0 - mean) / static_cast<double>(instances));
    }
  }
}

template <typename T>
std::vector<double> as_doubles(const std::vector<T>& values) {
  return std::vector<double>(values.begin(), values.end());
}

}  // namespace

void SyntheticConfig::validate() const {
  if (d == 0 || n_voters == 0 || alt_per_instance == 0 ||
      n_test_instances == 0 || n_runs == 0 || profile_sample_count == 0) {
    throw DomainError("synthetic config counts must all be positive");
  }
  if (alt_per_instance < 2) throw DomainError("alt_per_instance must be >= 2");
  check_grid(comparisons_grid, "comparisons_grid");
  check_grid(voters_grid, "voters_grid");
}

void MoralMachineConfig::validate() const {
  if (n_voters == 0 || n_test_instances == 0 || profile_sample_count == 0) {
    throw DomainError("moral machine config counts must all be positive");
  }
  check_grid(alternatives_grid, "alternatives_grid");
  for (std::size_t m : alternatives_grid) {
    if (m < 2) throw DomainError("alternatives_grid entries must be >= 2");
  }
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

Population gen_population(std::size_t d, std::size_t n_voters, Rng& rng) {
  Population pop;
  pop.mean.resize(d);
  for (double& m : pop.mean) m = rng.uniform(-1.0, 1.0);
  pop.betas.assign(n_voters, std::vector<double>(d));
  for (auto& beta : pop.betas) {
    for (std::size_t k = 0; k < d; ++k) beta[k] = rng.normal(pop.mean[k], 1.0);
  }
  return pop;
}

Population gen_population(const SyntheticConfig& config, Rng& rng) {
  return gen_population(config.d, config.n_voters, rng);
}

std::vector<PairwiseComparison> gen_voter_comparisons(
    std::span<const double> beta, std::size_t n, Rng& rng) {
  const std::size_t d = beta.size();
  const double stddev = std::sqrt(kThurstoneVariance);
  std::vector<PairwiseComparison> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> x1(d);
    std::vector<double> x2(d);
    for (double& v : x1) v = rng.normal(0.0, 1.0);
    for (double& v : x2) v = rng.normal(0.0, 1.0);
    const double u1 =
        rng.normal(std::inner_product(beta.begin(), beta.end(), x1.begin(), 0.0), stddev);
    const double u2 =
        rng.normal(std::inner_product(beta.begin(), beta.end(), x2.begin(), 0.0), stddev);
    if (u1 >= u2) {
      out.push_back({std::move(x1), std::move(x2)});
    } else {
      out.push_back({std::move(x2), std::move(x1)});
    }
  }
  return out;
}

std::vector<Alternative> gen_instance(std::size_t d, std::size_t m, Rng& rng) {
  std::vector<Alternative> alts(m);
  for (std::size_t i = 0; i < m; ++i) {
    alts[i].id = padded_id(i, m);
    alts[i].features.resize(d);
    for (double& v : alts[i].features) v = rng.normal(0.0, 1.0);
  }
  return alts;
}

std::size_t ground_truth_winner_from_modes(
    std::span<const std::vector<double>> modes, std::size_t n_samples,
    Rng& rng, ProfileSampling sampling) {
  if (n_samples == 0) throw DomainError("ground truth needs n_samples >= 1");
  if (modes.empty() || modes.front().empty()) {
    throw DomainError("ground truth needs voters and alternatives");
  }
  const std::size_t m = modes.front().size();
  // Integer Borda totals: every sample awards m - position points, so the
  // argmax over totals is the Borda winner of the sampled mean profile
  // (per-voter shares are equal, so plain totals weight voters equally).
  std::vector<std::uint64_t> totals(m, 0);
  std::vector<double> utilities;
  std::vector<std::size_t> order;
  auto record = [&](std::span<const double> voter_modes) {
    sample_order(Family::kThurstoneMosteller, voter_modes, 1.0, rng, utilities, order);
    for (std::size_t j = 0; j < m; ++j) totals[order[j]] += m - 1 - j;
  };
  if (sampling == ProfileSampling::kPerVoter) {
    const std::size_t per_voter = (n_samples + modes.size() - 1) / modes.size();
    for (const auto& voter_modes : modes) {
      for (std::size_t s = 0; s < per_voter; ++s) record(voter_modes);
    }
  } else {
    for (std::size_t s = 0; s < n_samples; ++s) {
      record(modes[rng.index(modes.size())]);
    }
  }
  return static_cast<std::size_t>(
      std::max_element(totals.begin(), totals.end()) - totals.begin());
}

std::size_t ground_truth_winner(std::span<const std::vector<double>> betas,
                                std::span<const Alternative> alternatives,
                                std::size_t n_samples, Rng& rng,
                                ProfileSampling sampling) {
  if (alternatives.empty()) throw DomainError("ground truth over an empty set");
  validate_alternatives(alternatives);
  // Work in id order so sampling tie-breaks and argmax ties favor small ids.
  std::vector<std::size_t> by_id(alternatives.size());
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t l, std::size_t r) {
    return alternatives[l].id < alternatives[r].id;
  });
  std::vector<Alternative> sorted;
  for (std::size_t i : by_id) sorted.push_back(alternatives[i]);
  const auto modes = modes_for(betas, sorted);
  return by_id[ground_truth_winner_from_modes(modes, n_samples, rng, sampling)];
}

AccuracyCurve eval_step2(const SyntheticConfig& config) {
  config.validate();
  AccuracyCurve curve;
  curve.x_values = as_doubles(config.comparisons_grid);
  curve.per_run.assign(config.n_runs, std::vector<double>(config.comparisons_grid.size()));
  const std::size_t max_comparisons =
      *std::max_element(config.comparisons_grid.begin(), config.comparisons_grid.end());
  const Rng master(config.master_seed);

  parallel_for(config.n_runs, config.threads, [&](std::size_t run) {
    const Rng run_rng = master.split(run);
    Rng pop_rng = run_rng.split(kPopulationStream);
    const Population pop = gen_population(config, pop_rng);

    Rng inst_rng = run_rng.split(kInstanceStream);
    std::vector<std::vector<Alternative>> instances;
    for (std::size_t t = 0; t < config.n_test_instances; ++t) {
      instances.push_back(gen_instance(config.d, config.alt_per_instance, inst_rng));
    }

    // Nested data: a grid point with k comparisons uses each voter's first k.
    std::vector<std::vector<PairwiseComparison>> data(config.n_voters);
    for (std::size_t i = 0; i < config.n_voters; ++i) {
      Rng cmp_rng = run_rng.split(kComparisonStream).split(i);
      data[i] = gen_voter_comparisons(pop.betas[i], max_comparisons, cmp_rng);
    }

    std::vector<std::size_t> true_winner(config.n_test_instances);
    for (std::size_t t = 0; t < config.n_test_instances; ++t) {
      Rng rng = run_rng.split(kTrueWinnerStream).split(t);
      true_winner[t] = ground_truth_winner(pop.betas, instances[t],
                                           config.profile_sample_count, rng,
                                           config.sampling);
    }

    for (std::size_t g = 0; g < config.comparisons_grid.size(); ++g) {
      const std::size_t k = config.comparisons_grid[g];
      std::vector<std::vector<double>> learned(config.n_voters);
      for (std::size_t i = 0; i < config.n_voters; ++i) {
        learned[i] = fit_voter(std::span(data[i]).first(k), config.fit).beta;
      }
      std::size_t hits = 0;
      for (std::size_t t = 0; t < config.n_test_instances; ++t) {
        Rng rng = run_rng.split(kModelWinnerStream).split(g).split(t);
        const std::size_t w = ground_truth_winner(
            learned, instances[t], config.profile_sample_count, rng, config.sampling);
        if (w == true_winner[t]) ++hits;
      }
      curve.per_run[run][g] =
          static_cast<double>(hits) / static_cast<double>(config.n_test_instances);
    }
  });
  fill_statistics(curve, config.n_test_instances);
  return curve;
}

AccuracyCurve eval_step3(const SyntheticConfig& config) {
  config.validate();
  AccuracyCurve curve;
  curve.x_values = as_doubles(config.voters_grid);
  curve.per_run.assign(config.n_runs, std::vector<double>(config.voters_grid.size()));
  const std::size_t max_voters =
      *std::max_element(config.voters_grid.begin(), config.voters_grid.end());
  const Rng master(config.master_seed);

  parallel_for(config.n_runs, config.threads, [&](std::size_t run) {
    const Rng run_rng = master.split(run);
    Rng pop_rng = run_rng.split(kPopulationStream);
    const Population pop = gen_population(config.d, max_voters, pop_rng);

    Rng inst_rng = run_rng.split(kInstanceStream);
    std::vector<std::vector<Alternative>> instances;
    for (std::size_t t = 0; t < config.n_test_instances; ++t) {
      instances.push_back(gen_instance(config.d, config.alt_per_instance, inst_rng));
    }

    for (std::size_t g = 0; g < config.voters_grid.size(); ++g) {
      const std::span<const std::vector<double>> betas =
          std::span(pop.betas).first(config.voters_grid[g]);
      const SummaryModel summary = summarize(betas);
      std::size_t hits = 0;
      for (std::size_t t = 0; t < config.n_test_instances; ++t) {
        Rng rng = run_rng.split(kTrueWinnerStream).split(g).split(t);
        const std::size_t truth = ground_truth_winner(
            betas, instances[t], config.profile_sample_count, rng, config.sampling);
        if (decide_index(summary.beta_hat, instances[t]) == truth) ++hits;
      }
      curve.per_run[run][g] =
          static_cast<double>(hits) / static_cast<double>(config.n_test_instances);
    }
  });
  fill_statistics(curve, config.n_test_instances);
  return curve;
}

Alternative gen_mm_alternative(std::size_t index, Rng& rng) {
  std::vector<int> counts(kMmCharacterTypes, 0);
  const std::size_t characters = 1 + rng.index(5);
  for (std::size_t c = 0; c < characters; ++c) ++counts[rng.index(kMmCharacterTypes)];
  const MmRelation relation =
      rng.index(2) == 0 ? MmRelation::kPassengers : MmRelation::kPedestrians;
  MmLegality legality = MmLegality::kNone;
  if (relation == MmRelation::kPedestrians) {
    legality = static_cast<MmLegality>(rng.index(3));
  }
  return {padded_id(index, 100), encode_mm_alternative(counts, relation, legality)};
}

AccuracyCurve eval_mm_step3(const MoralMachineConfig& config) {
  config.validate();
  AccuracyCurve curve;
  curve.x_values = as_doubles(config.alternatives_grid);
  curve.per_run.assign(1, std::vector<double>(config.alternatives_grid.size()));
  const Rng master(config.master_seed);
  Rng pop_rng = master.split(kPopulationStream);
  const Population pop = gen_population(kMmFeatureDim, config.n_voters, pop_rng);
  const SummaryModel summary = summarize(pop.betas);

  std::vector<std::size_t> hits(config.alternatives_grid.size() *
                                config.n_test_instances);
  parallel_for(hits.size(), config.threads, [&](std::size_t job) {
    const std::size_t g = job / config.n_test_instances;
    const std::size_t t = job % config.n_test_instances;
    const Rng job_rng = master.split(kInstanceStream).split(g).split(t);
    Rng inst_rng = job_rng.split(0);
    std::vector<Alternative> alts;
    for (std::size_t i = 0; i < config.alternatives_grid[g]; ++i) {
      alts.push_back(gen_mm_alternative(i, inst_rng));
    }
    Rng truth_rng = job_rng.split(1);
    const std::size_t truth =
        ground_truth_winner(pop.betas, alts, config.profile_sample_count,
                            truth_rng, ProfileSampling::kVoterUniform);
    hits[job] = decide_index(summary.beta_hat, alts) == truth ? 1 : 0;
  });
  for (std::size_t g = 0; g < config.alternatives_grid.size(); ++g) {
    std::size_t total = 0;
    for (std::size_t t = 0; t < config.n_test_instances; ++t) {
      total += hits[g * config.n_test_instances + t];
    }
    curve.per_run[0][g] =
        static_cast<double>(total) / static_cast<double>(config.n_test_instances);
  }
  fill_statistics(curve, config.n_test_instances);
  return curve;
}

}  // namespace swapvote
