#pragma once

// Summarization of per-voter models into one societal TM model, and the
// runtime decision over a finite alternative set.

#include <cstddef>
#include <span>
#include <vector>

#include "swapvote/profile.hpp"

namespace swapvote {

struct SummaryModel {
  std::vector<double> beta_hat;
  std::size_t n_voters = 0;
};

// Mean of the voter parameters. Throws DomainError on an empty list or
// ragged dimensions.
SummaryModel summarize(std::span<const std::vector<double>> betas);

// KL(N(m1, v1) || N(m2, v2)). Throws DomainError unless v1, v2 > 0.
double gaussian_kl(double m1, double v1, double m2, double v2);

// KL between the average of the voters' TM utilities at x,
// Normal(mean_i beta_i.x, 1/(2N)), and the candidate's utility at x,
// Normal(candidate.x, 1/2).
double summary_kl(std::span<const std::vector<double>> betas,
                  std::span<const double> candidate,
                  std::span<const double> x);

// Index of the alternative with the largest beta_hat.x; exact ties go to the
// smallest id. Throws DomainError on an empty set or dimension mismatch.
std::size_t decide_index(std::span<const double> beta_hat,
                         std::span<const Alternative> alternatives);
const Alternative& decide(const SummaryModel& model,
                          std::span<const Alternative> alternatives);

// Phi(beta.a - beta.b): TM probability that a is preferred to b.
double predict_pairwise(std::span<const double> beta, const Alternative& a,
                        const Alternative& b);

}  // namespace swapvote
