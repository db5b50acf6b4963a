#include "swapvote/normal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "swapvote/errors.hpp"

namespace swapvote {

namespace {

constexpr double kAsymptoticThreshold = -20.0;
const double kLogSqrtTwoPi = 0.5 * std::log(2.0 * std::numbers::pi);

// 1 - 1/t^2 + 3/t^4 - 15/t^6 + ... , truncated once terms stop shrinking.
// At t <= -20 the first omitted term is below 1e-13.
double mills_series(double t) {
  const double inv_t2 = 1.0 / (t * t);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * inv_t2;
    sum += term;
  }
  return sum;
}

}  // namespace

double std_normal_pdf(double t) {
  return std::exp(-0.5 * t * t - kLogSqrtTwoPi);
}

double std_normal_cdf(double t) {
  return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

double log_std_normal_cdf(double t) {
  if (std::isnan(t)) throw DomainError("log_std_normal_cdf of NaN");
  if (t == std::numeric_limits<double>::infinity()) return 0.0;
  if (t > 0.0) {
    return std::log1p(-0.5 * std::erfc(t / std::numbers::sqrt2));
  }
  if (t >= kAsymptoticThreshold) {
    return std::log(0.5 * std::erfc(-t / std::numbers::sqrt2));
  }
  if (t == -std::numeric_limits<double>::infinity()) return t;
  // Phi(t) = phi(t)/(-t) * series(t) for t -> -inf.
  return -0.5 * t * t - kLogSqrtTwoPi - std::log(-t) +
         std::log(mills_series(t));
}

double inverse_mills_ratio(double t) {
  if (std::isnan(t)) throw DomainError("inverse_mills_ratio of NaN");
  if (t >= kAsymptoticThreshold) {
    return std::exp(-0.5 * t * t - kLogSqrtTwoPi - log_std_normal_cdf(t));
  }
  return -t / mills_series(t);
}

}  // namespace swapvote
