#include "swapvote/pipeline.hpp"

#include <cmath>
#include <numeric>

#include "swapvote/errors.hpp"
#include "swapvote/normal.hpp"
#include "swapvote/processes.hpp"

namespace swapvote {

namespace {

double utility(std::span<const double> beta, std::span<const double> x) {
  if (beta.size() != x.size()) {
    throw DomainError("dimension mismatch: beta has " +
                      std::to_string(beta.size()) + ", features have " +
                      std::to_string(x.size()));
  }
  return std::inner_product(beta.begin(), beta.end(), x.begin(), 0.0);
}

}  // namespace

SummaryModel summarize(std::span<const std::vector<double>> betas) {
  if (betas.empty()) throw DomainError("summarize needs at least one voter");
  const std::size_t d = betas.front().size();
  SummaryModel model;
  model.beta_hat.assign(d, 0.0);
  model.n_voters = betas.size();
  for (const std::vector<double>& beta : betas) {
    if (beta.size() != d) throw DomainError("voter parameters have ragged dimensions");
    for (std::size_t k = 0; k < d; ++k) model.beta_hat[k] += beta[k];
  }
  for (double& v : model.beta_hat) v /= static_cast<double>(betas.size());
  return model;
}

double gaussian_kl(double m1, double v1, double m2, double v2) {
  if (!(v1 > 0.0) || !(v2 > 0.0)) {
    throw DomainError("gaussian_kl needs positive variances");
  }
  const double diff = m1 - m2;
  return 0.5 * (std::log(v2 / v1) + (v1 + diff * diff) / v2 - 1.0);
}

double summary_kl(std::span<const std::vector<double>> betas,
                  std::span<const double> candidate,
                  std::span<const double> x) {
  if (betas.empty()) throw DomainError("summary_kl needs at least one voter");
  double mean_utility = 0.0;
  for (const std::vector<double>& beta : betas) mean_utility += utility(beta, x);
  const double n = static_cast<double>(betas.size());
  mean_utility /= n;
  return gaussian_kl(mean_utility, kThurstoneVariance / n,
                     utility(candidate, x), kThurstoneVariance);
}

std::size_t decide_index(std::span<const double> beta_hat,
                         std::span<const Alternative> alternatives) {
  if (alternatives.empty()) throw DomainError("decide over an empty alternative set");
  std::size_t best = 0;
  double best_utility = utility(beta_hat, alternatives[0].features);
  for (std::size_t i = 1; i < alternatives.size(); ++i) {
    const double u = utility(beta_hat, alternatives[i].features);
    if (u > best_utility ||
        (u == best_utility && alternatives[i].id < alternatives[best].id)) {
      best = i;
      best_utility = u;
    }
  }
  return best;
}

const Alternative& decide(const SummaryModel& model,
                          std::span<const Alternative> alternatives) {
  return alternatives[decide_index(model.beta_hat, alternatives)];
}

double predict_pairwise(std::span<const double> beta, const Alternative& a,
                        const Alternative& b) {
  if (a.id == b.id) throw DomainError("predict_pairwise of an alternative with itself");
  return std_normal_cdf(utility(beta, a.features) - utility(beta, b.features));
}

}  // namespace swapvote
