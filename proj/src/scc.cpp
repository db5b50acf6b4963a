#include "swapvote/scc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swapvote/errors.hpp"

namespace swapvote {

namespace {

template <typename Score>
WinnerSet argmax_within_tolerance(const std::map<AltId, Score>& scores) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [id, s] : scores) best = std::max(best, static_cast<double>(s));
  WinnerSet winners;
  for (const auto& [id, s] : scores) {
    if (static_cast<double>(s) >= best - kScoreTolerance) winners.push_back(id);
  }
  return winners;
}

bool contains(const WinnerSet& set, const AltId& id) {
  return std::binary_search(set.begin(), set.end(), id);
}

// P(a at position j), indexed [a][j-1].
std::map<AltId, std::vector<double>> position_mass(
    const AnonymousProfile& profile) {
  const std::size_t m = profile.size();
  std::map<AltId, std::vector<double>> mass;
  for (const AltId& id : profile.alternatives()) {
    mass[id] = std::vector<double>(m, 0.0);
  }
  for (const auto& [ranking, w] : profile.support()) {
    for (std::size_t j = 0; j < m; ++j) mass[ranking.order()[j]][j] += w;
  }
  return mass;
}

// Smallest gap between a decisive quantity and its threshold, together with
// the worst-case standard error of that quantity at one sample.
struct DecisionMargin {
  double gap = std::numeric_limits<double>::infinity();
  double unit_stddev = 0.5;
};

DecisionMargin decision_margin(SccKind kind, const AnonymousProfile& profile,
                               const WinnerSet& winners) {
  DecisionMargin margin;
  const std::vector<AltId>& alts = profile.alternatives();
  const std::size_t m = alts.size();
  if (m < 2) return margin;
  if (winners.size() > 1) margin.gap = 0.0;

  auto score_gap = [&](const auto& scores) {
    double top = -std::numeric_limits<double>::infinity();
    double runner_up = -std::numeric_limits<double>::infinity();
    for (const auto& [id, s] : scores) {
      if (contains(winners, id)) top = std::max(top, static_cast<double>(s));
      else runner_up = std::max(runner_up, static_cast<double>(s));
    }
    if (std::isfinite(runner_up)) margin.gap = std::min(margin.gap, top - runner_up);
  };

  switch (kind) {
    case SccKind::kPlurality:
      score_gap(positional_scores(profile, plurality_vector(m)));
      break;
    case SccKind::kBorda:
      margin.unit_stddev = 0.5 * static_cast<double>(m - 1);
      score_gap(positional_scores(profile, borda_vector(m)));
      break;
    case SccKind::kMaximin:
      score_gap(maximin_scores(profile));
      [[fallthrough]];
    case SccKind::kCopeland:
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
          margin.gap = std::min(
              margin.gap,
              std::abs(pairwise_support(profile, alts[i], alts[j]) - 0.5));
        }
      }
      break;
    case SccKind::kBucklin: {
      for (const auto& [id, masses] : position_mass(profile)) {
        double cumulative = 0.0;
        for (double p : masses) {
          cumulative += p;
          margin.gap = std::min(margin.gap, std::abs(cumulative - 0.5));
        }
      }
      break;
    }
  }
  return margin;
}

WinnerSet intersect(const WinnerSet& winners, std::span<const AltId> b) {
  WinnerSet out;
  for (const AltId& id : winners) {
    if (std::find(b.begin(), b.end(), id) != b.end()) out.push_back(id);
  }
  return out;
}

void finish_stability(StabilityReport& report, SccKind kind,
                      std::span<const AltId> b) {
  report.lhs = intersect(report.full_winners, b);
  report.applicable = !report.lhs.empty();
  report.stable = !report.applicable || report.lhs == report.rhs;
  if (!report.applicable) {
    report.notes.push_back(
        "winners over A do not meet B; stability holds vacuously");
  }
  if (kind == SccKind::kBucklin) {
    report.notes.push_back(
        "bucklin ties at the pivotal rank are broken by larger majority");
  }
}

void check_subset(const std::vector<AltId>& ground, std::span<const AltId> b) {
  if (b.empty()) throw DomainError("stability subset B is empty");
  for (const AltId& id : b) {
    if (!std::binary_search(ground.begin(), ground.end(), id)) {
      throw DomainError("'" + id + "' in B is not an alternative of A");
    }
  }
}

}  // namespace

std::string_view to_string(SccKind kind) {
  switch (kind) {
    case SccKind::kPlurality: return "plurality";
    case SccKind::kBorda: return "borda";
    case SccKind::kCopeland: return "copeland";
    case SccKind::kMaximin: return "maximin";
    case SccKind::kBucklin: return "bucklin";
  }
  return "unknown";
}

std::optional<SccKind> parse_scc_kind(std::string_view name) {
  for (SccKind kind : kAllSccKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<double> borda_vector(std::size_t m) {
  std::vector<double> s(m);
  for (std::size_t j = 0; j < m; ++j) s[j] = static_cast<double>(m - 1 - j);
  return s;
}

std::vector<double> plurality_vector(std::size_t m) {
  std::vector<double> s(m, 0.0);
  if (m > 0) s[0] = 1.0;
  return s;
}

std::map<AltId, double> positional_scores(const AnonymousProfile& profile,
                                          std::span<const double> score_vector) {
  const std::size_t m = profile.size();
  if (score_vector.size() != m) {
    throw DomainError("score vector has " + std::to_string(score_vector.size()) +
                      " entries for " + std::to_string(m) + " alternatives");
  }
  for (std::size_t j = 1; j < m; ++j) {
    if (score_vector[j] > score_vector[j - 1]) {
      throw DomainError("score vector must be non-increasing");
    }
  }
  std::map<AltId, double> scores;
  for (const AltId& id : profile.alternatives()) scores[id] = 0.0;
  for (const auto& [ranking, w] : profile.support()) {
    for (std::size_t j = 0; j < m; ++j) {
      scores[ranking.order()[j]] += score_vector[j] * w;
    }
  }
  return scores;
}

double pairwise_support(const AnonymousProfile& profile, std::string_view a,
                        std::string_view b) {
  if (a == b) throw DomainError("pairwise support needs distinct alternatives");
  if (!profile.contains(a) || !profile.contains(b)) {
    throw DomainError("pairwise support over an alternative outside the profile");
  }
  double support = 0.0;
  for (const auto& [ranking, w] : profile.support()) {
    if (ranking.prefers(a, b)) support += w;
  }
  return support;
}

std::map<AltId, int> copeland_scores(const AnonymousProfile& profile) {
  const std::vector<AltId>& alts = profile.alternatives();
  std::map<AltId, int> scores;
  for (const AltId& id : alts) scores[id] = 0;
  for (std::size_t i = 0; i < alts.size(); ++i) {
    for (std::size_t j = i + 1; j < alts.size(); ++j) {
      const double s = pairwise_support(profile, alts[i], alts[j]);
      if (s > 0.5 + kScoreTolerance) ++scores[alts[i]];
      else if (s < 0.5 - kScoreTolerance) ++scores[alts[j]];
    }
  }
  return scores;
}

std::map<AltId, double> maximin_scores(const AnonymousProfile& profile) {
  const std::vector<AltId>& alts = profile.alternatives();
  std::map<AltId, double> scores;
  for (const AltId& a : alts) {
    double worst = 1.0;
    for (const AltId& b : alts) {
      if (a != b) worst = std::min(worst, pairwise_support(profile, a, b));
    }
    scores[a] = worst;
  }
  return scores;
}

std::map<AltId, BucklinScore> bucklin_scores(const AnonymousProfile& profile) {
  std::map<AltId, BucklinScore> scores;
  for (const auto& [id, masses] : position_mass(profile)) {
    double cumulative = 0.0;
    BucklinScore score{masses.size(), 1.0};
    for (std::size_t k = 0; k < masses.size(); ++k) {
      cumulative += masses[k];
      if (cumulative > 0.5 + kScoreTolerance) {
        score = {k + 1, cumulative};
        break;
      }
    }
    scores[id] = score;
  }
  return scores;
}

WinnerSet apply_scc(SccKind kind, const AnonymousProfile& profile) {
  const std::size_t m = profile.size();
  switch (kind) {
    case SccKind::kPlurality:
      return argmax_within_tolerance(positional_scores(profile, plurality_vector(m)));
    case SccKind::kBorda:
      return argmax_within_tolerance(positional_scores(profile, borda_vector(m)));
    case SccKind::kCopeland:
      return argmax_within_tolerance(copeland_scores(profile));
    case SccKind::kMaximin:
      return argmax_within_tolerance(maximin_scores(profile));
    case SccKind::kBucklin: {
      const auto scores = bucklin_scores(profile);
      std::size_t best_rank = m;
      for (const auto& [id, s] : scores) best_rank = std::min(best_rank, s.rank);
      std::map<AltId, double> at_best;
      for (const auto& [id, s] : scores) {
        if (s.rank == best_rank) at_best[id] = s.mass;
      }
      return argmax_within_tolerance(at_best);
    }
  }
  throw DomainError("unknown SCC kind");
}

SwdReport check_swd_efficiency(SccKind kind, const AnonymousProfile& profile) {
  SwdReport report;
  report.winners = apply_scc(kind, profile);
  for (const AltId& a : profile.alternatives()) {
    for (const AltId& b : profile.alternatives()) {
      if (a == b || !swap_dominates(profile, a, b)) continue;
      if (contains(report.winners, b) && !contains(report.winners, a)) {
        report.violations.emplace_back(a, b);
      }
    }
  }
  report.holds = report.violations.empty();
  return report;
}

StrongSwdReport check_strong_swd_efficiency(SccKind kind,
                                            const AnonymousProfile& profile) {
  StrongSwdReport report;
  report.winners = apply_scc(kind, profile);
  for (const AltId& a : profile.alternatives()) {
    for (const AltId& b : profile.alternatives()) {
      if (a == b || !swap_dominates(profile, a, b)) continue;
      const bool a_wins = contains(report.winners, a);
      const bool b_wins = contains(report.winners, b);
      if (!swap_dominates(profile, b, a)) {
        if (b_wins) report.violations.push_back({a, b, 1});
      } else if (a_wins != b_wins) {
        report.violations.push_back({a, b, 2});
      }
    }
  }
  report.holds = report.violations.empty();
  return report;
}

StabilityReport check_stability(const ProcessSpec& spec, SccKind kind,
                                std::span<const Alternative> a,
                                std::span<const AltId> b,
                                const ProfileMode& mode) {
  validate_alternatives(a);
  std::vector<AltId> ground = ids_of(a);
  std::sort(ground.begin(), ground.end());
  check_subset(ground, b);

  std::vector<Alternative> subset;
  for (const Alternative& alt : a) {
    if (std::find(b.begin(), b.end(), alt.id) != b.end()) subset.push_back(alt);
  }

  StabilityReport report;
  if (std::holds_alternative<ExactMode>(mode)) {
    const AnonymousProfile full = exact_profile(spec, a);
    const AnonymousProfile restricted = exact_profile(spec, subset);
    report.full_winners = apply_scc(kind, full);
    report.rhs = apply_scc(kind, restricted);
  } else {
    const auto& mc = std::get<MonteCarloMode>(mode);
    const Rng root(mc.seed);
    Rng rng_full = root.split(0);
    Rng rng_restricted = root.split(1);
    const AnonymousProfile full = estimate_profile(spec, a, mc.samples, rng_full);
    const AnonymousProfile restricted =
        estimate_profile(spec, subset, mc.samples, rng_restricted);
    report.full_winners = apply_scc(kind, full);
    report.rhs = apply_scc(kind, restricted);
    const double root_n = std::sqrt(static_cast<double>(mc.samples));
    using Checked = std::pair<const AnonymousProfile*, const WinnerSet*>;
    for (const auto& [profile, winners] :
         {Checked{&full, &report.full_winners},
          Checked{&restricted, &report.rhs}}) {
      if (profile->size() < 2) continue;
      const DecisionMargin margin = decision_margin(kind, *profile, *winners);
      if (margin.gap < 2.0 * margin.unit_stddev / root_n) {
        report.low_confidence = true;
      }
    }
    if (report.low_confidence) {
      report.notes.push_back(
          "a deciding score gap is below twice the sampling standard error; "
          "increase samples before trusting a violation");
    }
  }
  finish_stability(report, kind, b);
  return report;
}

StabilityReport check_stability(SccKind kind, const AnonymousProfile& profile,
                                std::span<const AltId> b) {
  check_subset(profile.alternatives(), b);
  StabilityReport report;
  report.full_winners = apply_scc(kind, profile);
  report.rhs = apply_scc(kind, marginalize_profile(profile, b));
  finish_stability(report, kind, b);
  return report;
}

}  // namespace swapvote
