#pragma once

// Random inputs for property tests.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "swapvote/processes.hpp"
#include "swapvote/profile.hpp"
#include "swapvote/rng.hpp"

namespace testing {

using namespace swapvote;

inline std::vector<AltId> letters(std::size_t m) {
  std::vector<AltId> ids;
  for (std::size_t i = 0; i < m; ++i) ids.push_back(std::string(1, char('a' + i)));
  return ids;
}

inline AnonymousProfile example1() {
  return AnonymousProfile({"u", "v", "w", "x", "y"},
                          {{Ranking::parse("x>u>v>y>w"), 0.5},
                           {Ranking::parse("y>w>x>u>v"), 0.5}});
}

inline AnonymousProfile example3() {
  return AnonymousProfile({"a", "b", "c"},
                          {{Ranking::parse("a>b>c"), 0.35},
                           {Ranking::parse("b>a>c"), 0.35},
                           {Ranking::parse("c>a>b"), 0.1},
                           {Ranking::parse("a>c>b"), 0.1},
                           {Ranking::parse("b>c>a"), 0.1}});
}

// Up to `max_support` random rankings of `ids` with random weights.
inline AnonymousProfile random_profile(const std::vector<AltId>& ids,
                                       std::size_t max_support, Rng& rng) {
  std::vector<Ranking> rankings = all_rankings(ids);
  std::shuffle(rankings.begin(), rankings.end(), rng);
  const std::size_t k = 1 + rng.index(std::min(max_support, rankings.size()));
  std::map<Ranking, double> weights;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = rng.uniform(0.05, 1.0);
    weights[rankings[i]] = w;
    total += w;
  }
  for (auto& [r, w] : weights) w /= total;
  return AnonymousProfile(ids, std::move(weights));
}

// Profile with few distinct weight levels, so swap dominance and exact
// symmetries occur often.
inline AnonymousProfile random_coarse_profile(const std::vector<AltId>& ids,
                                              Rng& rng) {
  std::map<Ranking, double> weights;
  double total = 0.0;
  for (const Ranking& r : all_rankings(ids)) {
    const double w = static_cast<double>(rng.index(3));
    if (w > 0) {
      weights[r] = w;
      total += w;
    }
  }
  if (total == 0.0) return uniform_profile(ids);
  for (auto& [r, w] : weights) w /= total;
  return AnonymousProfile(ids, std::move(weights));
}

// Alternatives with one feature each so that mu = beta * feature; with
// beta = 1 the feature is the mode utility.
inline std::vector<Alternative> alternatives_with_modes(const std::vector<double>& modes) {
  std::vector<Alternative> alts;
  const std::vector<AltId> ids = letters(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) alts.push_back({ids[i], {modes[i]}});
  return alts;
}

inline ProcessSpec unit_process(Family family, double scale = 1.0) {
  return ProcessSpec{family, {1.0}, scale};
}

inline std::vector<AltId> random_subset(const std::vector<AltId>& ids, Rng& rng) {
  std::vector<AltId> out;
  while (out.empty()) {
    out.clear();
    for (const AltId& id : ids) {
      if (rng.index(2) == 1) out.push_back(id);
    }
  }
  return out;
}

}  // namespace testing
