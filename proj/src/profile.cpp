#include "swapvote/profile.hpp"

#include <algorithm>
#include <cmath>

#include "swapvote/errors.hpp"

namespace swapvote {

namespace {

std::vector<AltId> sorted_unique(std::vector<AltId> ids) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw DomainError("duplicate alternative id");
  }
  return ids;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

void validate_alternatives(std::span<const Alternative> alternatives) {
  if (alternatives.empty()) return;
  const std::size_t d = alternatives.front().features.size();
  std::vector<AltId> ids;
  ids.reserve(alternatives.size());
  for (const Alternative& alt : alternatives) {
    if (alt.features.size() != d) {
      throw DomainError("alternative '" + alt.id +
                        "' has feature dimension " +
                        std::to_string(alt.features.size()) + ", expected " +
                        std::to_string(d));
    }
    ids.push_back(alt.id);
  }
  sorted_unique(std::move(ids));
}

std::vector<AltId> ids_of(std::span<const Alternative> alternatives) {
  std::vector<AltId> ids;
  ids.reserve(alternatives.size());
  for (const Alternative& alt : alternatives) ids.push_back(alt.id);
  return ids;
}

// ---------------------------------------------------------------------------
// Ranking

Ranking::Ranking(std::vector<AltId> order) : order_(std::move(order)) {
  sorted_unique(order_);
}

Ranking Ranking::parse(std::string_view text) {
  std::vector<AltId> order;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find('>', start);
    const std::string_view piece = trim(text.substr(start, pos - start));
    if (piece.empty()) throw DomainError("empty id in ranking '" +
                                         std::string(text) + "'");
    order.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return Ranking(std::move(order));
}

bool Ranking::contains(std::string_view id) const {
  return std::find(order_.begin(), order_.end(), id) != order_.end();
}

std::size_t Ranking::position(std::string_view id) const {
  const auto it = std::find(order_.begin(), order_.end(), id);
  if (it == order_.end()) {
    throw DomainError("alternative '" + std::string(id) + "' not ranked");
  }
  return static_cast<std::size_t>(it - order_.begin()) + 1;
}

bool Ranking::prefers(std::string_view a, std::string_view b) const {
  return position(a) < position(b);
}

const AltId& Ranking::at_position(std::size_t position) const {
  if (position == 0 || position > order_.size()) {
    throw DomainError("position out of range");
  }
  return order_[position - 1];
}

std::string Ranking::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (i > 0) out += '>';
    out += order_[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// AnonymousProfile

AnonymousProfile::AnonymousProfile(std::vector<AltId> alternatives,
                                   std::map<Ranking, double> weights)
    : alternatives_(sorted_unique(std::move(alternatives))) {
  if (alternatives_.empty()) {
    throw DomainError("profile over an empty alternative set");
  }
  double total = 0.0;
  for (const auto& [ranking, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("profile weight on " + ranking.to_string() +
                        " is negative or not finite");
    }
    std::vector<AltId> ranked = ranking.order();
    std::sort(ranked.begin(), ranked.end());
    if (ranked != alternatives_) {
      throw DomainError("ranking " + ranking.to_string() +
                        " does not rank exactly the ground set");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw DomainError("profile weights sum to " + std::to_string(total) +
                      ", expected 1");
  }
  for (auto& [ranking, w] : weights) {
    if (w > 0.0) support_.emplace(ranking, w / total);
  }
}

bool AnonymousProfile::contains(std::string_view id) const {
  return std::binary_search(alternatives_.begin(), alternatives_.end(), id);
}

double AnonymousProfile::weight(const Ranking& ranking) const {
  const auto it = support_.find(ranking);
  return it == support_.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------
// Operations

Ranking restrict_ranking(const Ranking& ranking, std::span<const AltId> b) {
  if (b.empty()) throw DomainError("restriction to an empty set");
  for (const AltId& id : b) {
    if (!ranking.contains(id)) {
      throw DomainError("restriction set contains '" + id +
                        "', which the ranking does not rank");
    }
  }
  std::vector<AltId> order;
  order.reserve(b.size());
  for (const AltId& id : ranking.order()) {
    if (std::find(b.begin(), b.end(), id) != b.end()) order.push_back(id);
  }
  if (order.size() != b.size()) throw DomainError("duplicate id in subset");
  return Ranking(std::move(order));
}

AnonymousProfile marginalize_profile(const AnonymousProfile& profile,
                                     std::span<const AltId> b) {
  if (b.empty()) throw DomainError("marginalization to an empty set");
  for (const AltId& id : b) {
    if (!profile.contains(id)) {
      throw DomainError("'" + id + "' is not in the profile's ground set");
    }
  }
  std::map<Ranking, double> weights;
  for (const auto& [ranking, w] : profile.support()) {
    weights[restrict_ranking(ranking, b)] += w;
  }
  return AnonymousProfile(std::vector<AltId>(b.begin(), b.end()),
                          std::move(weights));
}

Ranking swap_ranking(const Ranking& ranking, std::string_view a,
                     std::string_view b) {
  std::vector<AltId> order = ranking.order();
  const std::size_t pa = ranking.position(a) - 1;
  const std::size_t pb = ranking.position(b) - 1;
  std::swap(order[pa], order[pb]);
  return Ranking(std::move(order));
}

bool swap_dominates(const AnonymousProfile& profile, std::string_view a,
                    std::string_view b) {
  if (a == b) throw DomainError("swap dominance needs two distinct alternatives");
  if (!profile.contains(a) || !profile.contains(b)) {
    throw DomainError("swap dominance over an alternative outside the profile");
  }
  // Rankings outside the support weigh 0, so the only pairs (sigma,
  // sigma^ab) that can fail have at least one member in the support.
  for (const auto& [ranking, w] : profile.support()) {
    const double swapped = profile.weight(swap_ranking(ranking, a, b));
    const bool a_above = ranking.prefers(a, b);
    const double above = a_above ? w : swapped;
    const double below = a_above ? swapped : w;
    if (above < below - kWeightCompareTolerance) return false;
  }
  return true;
}

PreorderReport check_total_preorder(const AnonymousProfile& profile) {
  const std::vector<AltId>& alts = profile.alternatives();
  const std::size_t m = alts.size();
  std::vector<std::vector<bool>> dom(m, std::vector<bool>(m, true));
  PreorderReport report;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) dom[i][j] = swap_dominates(profile, alts[i], alts[j]);
      if (dom[i][j]) report.relation.emplace(alts[i], alts[j]);
    }
  }
  report.is_total = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!dom[i][j] && !dom[j][i]) report.is_total = false;
    }
  }
  report.is_transitive = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!dom[i][j]) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (dom[j][k] && !dom[i][k]) report.is_transitive = false;
      }
    }
  }
  report.is_total_preorder = report.is_total && report.is_transitive;
  return report;
}

std::vector<Ranking> all_rankings(std::vector<AltId> ids) {
  ids = sorted_unique(std::move(ids));
  std::vector<Ranking> out;
  do {
    out.emplace_back(ids);
  } while (std::next_permutation(ids.begin(), ids.end()));
  return out;
}

AnonymousProfile uniform_profile(std::vector<AltId> ids) {
  std::vector<Ranking> rankings = all_rankings(ids);
  std::map<Ranking, double> weights;
  const double w = 1.0 / static_cast<double>(rankings.size());
  for (Ranking& r : rankings) weights.emplace(std::move(r), w);
  return AnonymousProfile(std::move(ids), std::move(weights));
}

AnonymousProfile relabel_profile(const AnonymousProfile& profile,
                                 const std::map<AltId, AltId>& mapping) {
  auto rename = [&](const AltId& id) -> const AltId& {
    const auto it = mapping.find(id);
    if (it == mapping.end()) {
      throw DomainError("relabeling does not cover '" + id + "'");
    }
    return it->second;
  };
  std::vector<AltId> alts;
  for (const AltId& id : profile.alternatives()) alts.push_back(rename(id));
  std::map<Ranking, double> weights;
  for (const auto& [ranking, w] : profile.support()) {
    std::vector<AltId> order;
    for (const AltId& id : ranking.order()) order.push_back(rename(id));
    weights.emplace(Ranking(std::move(order)), w);
  }
  return AnonymousProfile(std::move(alts), std::move(weights));
}

}  // namespace swapvote
