#include "swapvote/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "swapvote/errors.hpp"
#include "swapvote/normal.hpp"

namespace swapvote {

namespace {

const double kThurstoneStddev = std::sqrt(kThurstoneVariance);

// Alternatives sorted by id, so index order is tie-break order.
std::vector<Alternative> sorted_by_id(std::span<const Alternative> alts) {
  validate_alternatives(alts);
  std::vector<Alternative> out(alts.begin(), alts.end());
  std::sort(out.begin(), out.end(),
            [](const Alternative& l, const Alternative& r) { return l.id < r.id; });
  return out;
}

Ranking ranking_from_order(const std::vector<Alternative>& alts,
                           const std::vector<std::size_t>& order) {
  std::vector<AltId> ids;
  ids.reserve(order.size());
  for (std::size_t i : order) ids.push_back(alts[i].id);
  return Ranking(std::move(ids));
}

}  // namespace

void ProcessSpec::validate() const {
  if (family == Family::kPlackettLuce &&
      !(gumbel_scale > 0.0 && std::isfinite(gumbel_scale))) {
    throw DomainError("Gumbel scale must be positive");
  }
}

double mode_utility(const ProcessSpec& spec, const Alternative& x) {
  if (x.features.size() != spec.beta.size()) {
    throw DomainError("alternative '" + x.id + "' has dimension " +
                      std::to_string(x.features.size()) +
                      ", process expects " + std::to_string(spec.beta.size()));
  }
  return std::inner_product(spec.beta.begin(), spec.beta.end(),
                            x.features.begin(), 0.0);
}

std::vector<double> mode_utilities(const ProcessSpec& spec,
                                   std::span<const Alternative> alternatives) {
  std::vector<double> modes;
  modes.reserve(alternatives.size());
  for (const Alternative& x : alternatives) {
    modes.push_back(mode_utility(spec, x));
  }
  return modes;
}

UtilityDraw sample_utilities(const ProcessSpec& spec,
                             std::span<const Alternative> alternatives,
                             Rng& rng) {
  spec.validate();
  const std::vector<Alternative> alts = sorted_by_id(alternatives);
  UtilityDraw draw;
  for (const Alternative& x : alts) {
    const double mu = mode_utility(spec, x);
    draw[x.id] = spec.family == Family::kThurstoneMosteller
                     ? rng.normal(mu, kThurstoneStddev)
                     : rng.gumbel(mu, spec.gumbel_scale);
  }
  return draw;
}

void sample_order(Family family, std::span<const double> modes,
                  double gumbel_scale, Rng& rng, std::vector<double>& utilities,
                  std::vector<std::size_t>& order) {
  const std::size_t m = modes.size();
  utilities.resize(m);
  if (family == Family::kThurstoneMosteller) {
    for (std::size_t i = 0; i < m; ++i) {
      utilities[i] = rng.normal(modes[i], kThurstoneStddev);
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      utilities[i] = rng.gumbel(modes[i], gumbel_scale);
    }
  }
  order.resize(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Insertion sort: m is small and the comparator encodes the tie-break.
  for (std::size_t i = 1; i < m; ++i) {
    const std::size_t cur = order[i];
    std::size_t j = i;
    while (j > 0) {
      const std::size_t prev = order[j - 1];
      const bool cur_first =
          utilities[cur] > utilities[prev] ||
          (utilities[cur] == utilities[prev] && cur < prev);
      if (!cur_first) break;
      order[j] = prev;
      --j;
    }
    order[j] = cur;
  }
}

Ranking sample_ranking(const ProcessSpec& spec,
                       std::span<const Alternative> alternatives, Rng& rng) {
  spec.validate();
  const std::vector<Alternative> alts = sorted_by_id(alternatives);
  const std::vector<double> modes = mode_utilities(spec, alts);
  std::vector<double> utilities;
  std::vector<std::size_t> order;
  sample_order(spec.family, modes, spec.gumbel_scale, rng, utilities, order);
  return ranking_from_order(alts, order);
}

double pairwise_prob_from_modes(Family family, double mode_a, double mode_b,
                                double gumbel_scale) {
  if (family == Family::kThurstoneMosteller) {
    // U_a - U_b ~ Normal(mu_a - mu_b, 1).
    return std_normal_cdf(mode_a - mode_b);
  }
  // exp(a)/(exp(a)+exp(b)) = 1/(1+exp(b-a)).
  return 1.0 / (1.0 + std::exp((mode_b - mode_a) / gumbel_scale));
}

double pairwise_prob(const ProcessSpec& spec, const Alternative& a,
                     const Alternative& b) {
  if (a.id == b.id) throw DomainError("pairwise_prob of an alternative with itself");
  spec.validate();
  return pairwise_prob_from_modes(spec.family, mode_utility(spec, a),
                                  mode_utility(spec, b), spec.gumbel_scale);
}

AnonymousProfile exact_profile(const ProcessSpec& spec,
                               std::span<const Alternative> alternatives) {
  spec.validate();
  const std::vector<Alternative> alts = sorted_by_id(alternatives);
  const std::size_t m = alts.size();
  if (m == 0) throw DomainError("exact profile over an empty set");
  if (spec.family == Family::kThurstoneMosteller && m >= 3) {
    throw UnsupportedExactError(
        "exact TM profiles need Gaussian orthant integrals for 3+ "
        "alternatives; use estimate_profile");
  }
  if (m > kMaxExactAlternatives) {
    throw SizeError("exact profile limited to " +
                    std::to_string(kMaxExactAlternatives) + " alternatives");
  }
  const std::vector<double> modes = mode_utilities(spec, alts);
  std::map<Ranking, double> weights;

  if (spec.family == Family::kThurstoneMosteller) {
    if (m == 1) {
      weights.emplace(Ranking({alts[0].id}), 1.0);
    } else {
      const double p = pairwise_prob_from_modes(spec.family, modes[0], modes[1]);
      weights.emplace(Ranking({alts[0].id, alts[1].id}), p);
      weights.emplace(Ranking({alts[1].id, alts[0].id}), 1.0 - p);
    }
    return AnonymousProfile(ids_of(alts), std::move(weights));
  }

  // Sequential choice: position j goes to x with prob exp(mu_x/g) over the
  // sum of the still-unplaced exp(mu/g). Evaluated in log space so that
  // far-apart utilities underflow to weight 0 instead of 0/0.
  std::vector<double> scaled(m);
  for (std::size_t i = 0; i < m; ++i) scaled[i] = modes[i] / spec.gumbel_scale;
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    double log_p = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      double top = scaled[perm[j]];
      for (std::size_t k = j + 1; k < m; ++k) top = std::max(top, scaled[perm[k]]);
      double sum = 0.0;
      for (std::size_t k = j; k < m; ++k) sum += std::exp(scaled[perm[k]] - top);
      log_p += scaled[perm[j]] - top - std::log(sum);
    }
    const double p = std::exp(log_p);
    weights.emplace(ranking_from_order(alts, perm), p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return AnonymousProfile(ids_of(alts), std::move(weights));
}

AnonymousProfile estimate_profile(const ProcessSpec& spec,
                                  std::span<const Alternative> alternatives,
                                  std::size_t n_samples, Rng& rng) {
  if (n_samples == 0) throw DomainError("estimate_profile needs n_samples >= 1");
  spec.validate();
  const std::vector<Alternative> alts = sorted_by_id(alternatives);
  if (alts.empty()) throw DomainError("estimate_profile over an empty set");
  const std::vector<double> modes = mode_utilities(spec, alts);
  const std::size_t m = alts.size();

  // Count orders keyed by their base-m digits; only distinct orders are
  // materialized as Ranking objects.
  std::unordered_map<std::uint64_t, std::size_t> counts;
  std::map<std::uint64_t, std::vector<std::size_t>> representative;
  std::vector<double> utilities;
  std::vector<std::size_t> order;
  const bool packable = m <= 16;
  std::map<std::vector<std::size_t>, std::size_t> wide_counts;
  for (std::size_t s = 0; s < n_samples; ++s) {
    sample_order(spec.family, modes, spec.gumbel_scale, rng, utilities, order);
    if (packable) {
      std::uint64_t key = 0;
      for (std::size_t i : order) key = key * 16 + i;
      if (counts[key]++ == 0) representative.emplace(key, order);
    } else {
      ++wide_counts[order];
    }
  }
  std::map<Ranking, double> weights;
  const double n = static_cast<double>(n_samples);
  for (const auto& [key, ord] : representative) {
    weights.emplace(ranking_from_order(alts, ord),
                    static_cast<double>(counts[key]) / n);
  }
  for (const auto& [ord, c] : wide_counts) {
    weights.emplace(ranking_from_order(alts, ord), static_cast<double>(c) / n);
  }
  return AnonymousProfile(ids_of(alts), std::move(weights));
}

bool utility_dominance(const ProcessSpec& spec, const Alternative& a,
                       const Alternative& b) {
  if (a.id == b.id) throw DomainError("utility_dominance of an alternative with itself");
  return mode_utility(spec, a) >= mode_utility(spec, b);
}

}  // namespace swapvote
