#pragma once

// Maximum-likelihood fitting of a voter's Thurstone-Mosteller parameter from
// pairwise comparisons. The negative log-likelihood
//
//   -sum_j log Phi(beta . (chosen_j - rejected_j)) + l2 * |beta|^2
//
// is convex, so any stationary point is the global minimum.

#include <cstddef>
#include <span>
#include <vector>

namespace swapvote {

struct PairwiseComparison {
  std::vector<double> chosen;
  std::vector<double> rejected;
};

struct FitConfig {
  int max_iterations = 500;
  // Stop once the gradient's infinity norm is at most this.
  double gradient_tolerance = 1e-8;
  double l2_penalty = 1e-6;
  // Empty means the zero vector.
  std::vector<double> initial_beta;
  // L-BFGS history length.
  int memory = 10;
};

struct FitResult {
  std::vector<double> beta;
  double final_objective = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  // Comparisons whose chosen and rejected vectors coincide; they carry no
  // information (constant log 2 in the objective).
  std::size_t degenerate_pairs = 0;
  // Objective after each accepted step, starting with the initial point.
  std::vector<double> objective_trace;
};

struct ObjectiveValue {
  double value = 0.0;
  std::vector<double> gradient;
};

// Throws DomainError on dimension mismatch or NaN input, NumericError when
// chosen - rejected overflows.
ObjectiveValue objective_and_gradient(std::span<const double> beta,
                                      std::span<const PairwiseComparison> data,
                                      double l2_penalty);

// Throws DomainError on empty data or an invalid config; NumericError if a
// feature difference overflows or the objective becomes non-finite.
FitResult fit_voter(std::span<const PairwiseComparison> data,
                    const FitConfig& config = {});

}  // namespace swapvote
