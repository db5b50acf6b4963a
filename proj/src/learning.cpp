#include "swapvote/learning.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

#include "swapvote/errors.hpp"
#include "swapvote/normal.hpp"

namespace swapvote {

namespace {

// Rows of (chosen - rejected), row-major.
struct DifferenceMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  std::size_t degenerate = 0;
};

DifferenceMatrix differences(std::span<const PairwiseComparison> data,
                             std::size_t dim) {
  DifferenceMatrix diff;
  diff.rows = data.size();
  diff.dim = dim;
  diff.values.reserve(data.size() * dim);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const PairwiseComparison& c = data[j];
    if (c.chosen.size() != dim || c.rejected.size() != dim) {
      throw DomainError("comparison " + std::to_string(j) + " has dimension " +
                        std::to_string(c.chosen.size()) + "/" +
                        std::to_string(c.rejected.size()) + ", expected " +
                        std::to_string(dim));
    }
    bool same = true;
    for (std::size_t k = 0; k < dim; ++k) {
      if (std::isnan(c.chosen[k]) || std::isnan(c.rejected[k])) {
        throw DomainError("comparison " + std::to_string(j) + " has a NaN feature");
      }
      const double delta = c.chosen[k] - c.rejected[k];
      if (!std::isfinite(delta)) {
        throw NumericError("comparison " + std::to_string(j) +
                           " has a non-finite feature difference");
      }
      diff.values.push_back(delta);
      same = same && c.chosen[k] == c.rejected[k];
    }
    if (same) ++diff.degenerate;
  }
  return diff;
}

double evaluate(const DifferenceMatrix& diff, std::span<const double> beta,
                double l2, std::vector<double>& gradient) {
  const std::size_t d = diff.dim;
  gradient.assign(d, 0.0);
  double value = 0.0;
  for (std::size_t j = 0; j < diff.rows; ++j) {
    const double* row = diff.values.data() + j * d;
    const double t = std::inner_product(row, row + d, beta.begin(), 0.0);
    value -= log_std_normal_cdf(t);
    const double w = inverse_mills_ratio(t);
    for (std::size_t k = 0; k < d; ++k) gradient[k] -= w * row[k];
  }
  for (std::size_t k = 0; k < d; ++k) {
    value += l2 * beta[k] * beta[k];
    gradient[k] += 2.0 * l2 * beta[k];
  }
  return value;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: returns -H * g.
std::vector<double> lbfgs_direction(const std::deque<CurvaturePair>& history,
                                    std::span<const double> gradient) {
  std::vector<double> q(gradient.begin(), gradient.end());
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    const CurvaturePair& p = history[i];
    alpha[i] = p.rho * dot(p.s, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * p.y[k];
  }
  if (!history.empty()) {
    const CurvaturePair& last = history.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    const CurvaturePair& p = history[i];
    const double b = p.rho * dot(p.y, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += p.s[k] * (alpha[i] - b);
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

ObjectiveValue objective_and_gradient(std::span<const double> beta,
                                      std::span<const PairwiseComparison> data,
                                      double l2_penalty) {
  for (double b : beta) {
    if (std::isnan(b)) throw DomainError("beta has a NaN entry");
  }
  const DifferenceMatrix diff = differences(data, beta.size());
  ObjectiveValue out;
  out.value = evaluate(diff, beta, l2_penalty, out.gradient);
  return out;
}

FitResult fit_voter(std::span<const PairwiseComparison> data,
                    const FitConfig& config) {
  if (data.empty()) throw DomainError("fit_voter needs at least one comparison");
  if (!(config.gradient_tolerance > 0.0)) {
    throw DomainError("gradient tolerance must be positive");
  }
  if (!(config.l2_penalty >= 0.0)) throw DomainError("l2 penalty must be >= 0");
  if (config.max_iterations < 0 || config.memory < 1) {
    throw DomainError("invalid iteration or memory setting");
  }
  const std::size_t d = data.front().chosen.size();
  const DifferenceMatrix diff = differences(data, d);

  FitResult result;
  result.degenerate_pairs = diff.degenerate;
  result.beta = config.initial_beta.empty() ? std::vector<double>(d, 0.0)
                                            : config.initial_beta;
  if (result.beta.size() != d) {
    throw DomainError("initial beta has dimension " +
                      std::to_string(result.beta.size()) + ", expected " +
                      std::to_string(d));
  }

  std::vector<double> gradient;
  double value = evaluate(diff, result.beta, config.l2_penalty, gradient);
  if (!std::isfinite(value)) throw NumericError("objective is not finite at the start");
  result.objective_trace.push_back(value);

  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-20;
  std::deque<CurvaturePair> history;
  std::vector<double> trial(d);
  std::vector<double> trial_gradient;

  while (true) {
    result.gradient_norm = inf_norm(gradient);
    if (result.gradient_norm <= config.gradient_tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= config.max_iterations) break;

    std::vector<double> direction = lbfgs_direction(history, gradient);
    double slope = dot(direction, gradient);
    if (!(slope < 0.0)) {
      history.clear();
      direction = gradient;
      for (double& v : direction) v = -v;
      slope = dot(direction, gradient);
    }
    // Without curvature information, take a unit-length first step.
    double step = history.empty() ? std::min(1.0, 1.0 / std::sqrt(-slope)) : 1.0;

    double trial_value = 0.0;
    bool accepted = false;
    // Near the optimum the decrease can fall below the rounding error of the
    // objective and Armijo never succeeds. Keep the first trial whose
    // objective is unchanged up to rounding and whose gradient is smaller.
    const double roundoff = 64 * std::numeric_limits<double>::epsilon() * (std::abs(value) + 1);
    std::optional<double> fallback_step;
    while (step >= kMinStep) {
      for (std::size_t k = 0; k < d; ++k) {
        trial[k] = result.beta[k] + step * direction[k];
      }
      trial_value = evaluate(diff, trial, config.l2_penalty, trial_gradient);
      // value + c*step*slope can round back to value; a step that then
      // neither lowers the objective nor the gradient is no progress.
      if (std::isfinite(trial_value) &&
          trial_value <= value + kArmijo * step * slope &&
          (trial_value < value || inf_norm(trial_gradient) < result.gradient_norm)) {
        accepted = true;
        break;
      }
      if (!fallback_step && std::isfinite(trial_value) && trial_value <= value + roundoff &&
          inf_norm(trial_gradient) < result.gradient_norm) {
        fallback_step = step;
      }
      step *= 0.5;
    }
    if (!accepted && fallback_step) {
      step = *fallback_step;
      for (std::size_t k = 0; k < d; ++k) {
        trial[k] = result.beta[k] + step * direction[k];
      }
      trial_value = evaluate(diff, trial, config.l2_penalty, trial_gradient);
      accepted = true;
    }
    if (!accepted) break;

    CurvaturePair pair{std::vector<double>(d), std::vector<double>(d), 0.0};
    for (std::size_t k = 0; k < d; ++k) {
      pair.s[k] = trial[k] - result.beta[k];
      pair.y[k] = trial_gradient[k] - gradient[k];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y))) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (history.size() > static_cast<std::size_t>(config.memory)) {
        history.pop_front();
      }
    }

    result.beta.swap(trial);
    gradient.swap(trial_gradient);
    value = trial_value;
    result.objective_trace.push_back(value);
    ++result.iterations;
  }

  result.final_objective = value;
  for (double b : result.beta) {
    if (!std::isfinite(b)) throw NumericError("fitted beta is not finite");
  }
  return result;
}

}  // namespace swapvote
