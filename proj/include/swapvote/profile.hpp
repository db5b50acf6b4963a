#pragma once

// Finite-alternative combinatorics: rankings, anonymous preference profiles,
// marginalization, swaps and the swap-dominance relation.
//
// Alternatives are identified by string ids. Id order (std::string
// comparison) is the lexicographic tie-break order used everywhere in the
// library.

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swapvote {

using AltId = std::string;

// Profile weights must sum to 1 within this tolerance; they are then
// renormalized exactly.
inline constexpr double kWeightSumTolerance = 1e-9;
// Two profile weights closer than this compare equal in swap-dominance
// checks (exact profiles are products of rounded factors).
inline constexpr double kWeightCompareTolerance = 1e-12;

// A point x in feature space with a unique id.
struct Alternative {
  AltId id;
  std::vector<double> features;

  bool operator==(const Alternative&) const = default;
};

// Throws DomainError on duplicate ids or ragged feature dimensions.
void validate_alternatives(std::span<const Alternative> alternatives);
std::vector<AltId> ids_of(std::span<const Alternative> alternatives);

// Total order over a finite set: order()[0] is the most preferred.
class Ranking {
 public:
  Ranking() = default;
  // Throws DomainError if `order` repeats an id.
  explicit Ranking(std::vector<AltId> order);

  // Parses "a>b>c". Whitespace around ids is ignored.
  static Ranking parse(std::string_view text);

  const std::vector<AltId>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  bool contains(std::string_view id) const;
  // 1-based position (1 = most preferred). Throws DomainError if absent.
  std::size_t position(std::string_view id) const;
  bool prefers(std::string_view a, std::string_view b) const;
  const AltId& at_position(std::size_t position) const;

  std::string to_string() const;

  auto operator<=>(const Ranking&) const = default;
  bool operator==(const Ranking&) const = default;

 private:
  std::vector<AltId> order_;
};

// Distribution over rankings of a finite ground set, stored sparsely:
// rankings missing from support() carry weight 0.
class AnonymousProfile {
 public:
  // Validates that every ranking ranks exactly `alternatives`, that weights
  // are nonnegative and sum to 1 within kWeightSumTolerance; renormalizes.
  // Zero weights are dropped from the support.
  AnonymousProfile(std::vector<AltId> alternatives,
                   std::map<Ranking, double> weights);

  // Sorted ground set.
  const std::vector<AltId>& alternatives() const { return alternatives_; }
  const std::map<Ranking, double>& support() const { return support_; }
  std::size_t size() const { return alternatives_.size(); }
  bool contains(std::string_view id) const;
  double weight(const Ranking& ranking) const;

 private:
  std::vector<AltId> alternatives_;
  std::map<Ranking, double> support_;
};

// Ranking over `b` preserving the relative order in `ranking`.
// Throws DomainError if `b` is empty or not a subset.
Ranking restrict_ranking(const Ranking& ranking, std::span<const AltId> b);

// Pushforward of `profile` onto rankings of `b`.
AnonymousProfile marginalize_profile(const AnonymousProfile& profile,
                                     std::span<const AltId> b);

// `ranking` with a and b exchanged. Throws DomainError if either is absent.
Ranking swap_ranking(const Ranking& ranking, std::string_view a,
                     std::string_view b);

// a swap-dominates b: every ranking with a above b weighs at least as much
// as its a<->b swap. Throws DomainError if a == b or either is missing.
bool swap_dominates(const AnonymousProfile& profile, std::string_view a,
                    std::string_view b);

struct PreorderReport {
  bool is_total = false;
  bool is_transitive = false;
  bool is_total_preorder = false;
  // All ordered pairs (a, b) with a swap-dominating b, reflexive pairs
  // included, in lexicographic order.
  std::set<std::pair<AltId, AltId>> relation;
};

PreorderReport check_total_preorder(const AnonymousProfile& profile);

// All |ids|! rankings of `ids`, lexicographic order.
std::vector<Ranking> all_rankings(std::vector<AltId> ids);

AnonymousProfile uniform_profile(std::vector<AltId> ids);

// Renames alternatives via `mapping` (must be a bijection on the ground set).
AnonymousProfile relabel_profile(const AnonymousProfile& profile,
                                 const std::map<AltId, AltId>& mapping);

}  // namespace swapvote
