#pragma once

namespace swapvote {

double std_normal_pdf(double t);
double std_normal_cdf(double t);

// log Phi(t). Accurate across the whole real line: erfc-based for
// t >= -20, asymptotic (Mills ratio) series below. Throws DomainError on NaN.
double log_std_normal_cdf(double t);

// phi(t) / Phi(t), the derivative of log Phi(t). Stable for very negative t,
// where it behaves like -t.
double inverse_mills_ratio(double t);

}  // namespace swapvote
