#pragma once

// Consistent permutation processes with linear mode utilities mu_x = beta.x:
// Thurstone-Mosteller (independent Normal(mu_x, 1/2) utilities) and
// Plackett-Luce (independent Gumbel(mu_x, gamma) utilities).

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "swapvote/profile.hpp"
#include "swapvote/rng.hpp"

namespace swapvote {

enum class Family { kThurstoneMosteller, kPlackettLuce };

// Largest ground set exact_profile will enumerate (8! rankings).
inline constexpr std::size_t kMaxExactAlternatives = 8;

// TM utility variance.
inline constexpr double kThurstoneVariance = 0.5;

struct ProcessSpec {
  Family family = Family::kThurstoneMosteller;
  std::vector<double> beta;
  // Gumbel scale; PL only.
  double gumbel_scale = 1.0;

  // Throws DomainError on a nonpositive or non-finite Gumbel scale.
  void validate() const;
};

using UtilityDraw = std::map<AltId, double>;

double mode_utility(const ProcessSpec& spec, const Alternative& x);
std::vector<double> mode_utilities(const ProcessSpec& spec,
                                   std::span<const Alternative> alternatives);

UtilityDraw sample_utilities(const ProcessSpec& spec,
                             std::span<const Alternative> alternatives,
                             Rng& rng);

Ranking sample_ranking(const ProcessSpec& spec,
                       std::span<const Alternative> alternatives, Rng& rng);

// Draws one ranking directly from mode utilities. On return `order` holds
// indices into `modes`, most preferred first; exact utility ties go to the
// lower index, so callers pass modes in id order. `utilities` is scratch.
void sample_order(Family family, std::span<const double> modes,
                  double gumbel_scale, Rng& rng, std::vector<double>& utilities,
                  std::vector<std::size_t>& order);

// P(a ranked above b). Throws DomainError when a and b share an id.
double pairwise_prob(const ProcessSpec& spec, const Alternative& a,
                     const Alternative& b);
double pairwise_prob_from_modes(Family family, double mode_a, double mode_b,
                                double gumbel_scale = 1.0);

// Pi(A) as a profile. PL for |A| <= 8; TM only for |A| <= 2
// (UnsupportedExactError otherwise, SizeError beyond 8).
AnonymousProfile exact_profile(const ProcessSpec& spec,
                               std::span<const Alternative> alternatives);

// Empirical distribution of n_samples draws of sample_ranking.
AnonymousProfile estimate_profile(const ProcessSpec& spec,
                                  std::span<const Alternative> alternatives,
                                  std::size_t n_samples, Rng& rng);

// a dominates b in the utility process, which for TM and PL holds exactly
// when mu_a >= mu_b.
bool utility_dominance(const ProcessSpec& spec, const Alternative& a,
                       const Alternative& b);

}  // namespace swapvote
