#pragma once

// Anonymous social choice correspondences and axiom checkers
// (SwD-efficiency, strong SwD-efficiency, stability).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "swapvote/processes.hpp"
#include "swapvote/profile.hpp"

namespace swapvote {

enum class SccKind { kPlurality, kBorda, kCopeland, kMaximin, kBucklin };

inline constexpr SccKind kAllSccKinds[] = {
    SccKind::kPlurality, SccKind::kBorda, SccKind::kCopeland,
    SccKind::kMaximin, SccKind::kBucklin};

// Scores closer than this are tied; pairwise support must exceed 1/2 by
// more than this to count as a win.
inline constexpr double kScoreTolerance = 1e-9;

std::string_view to_string(SccKind kind);
// Accepts "plurality", "borda", "copeland", "maximin", "bucklin".
std::optional<SccKind> parse_scc_kind(std::string_view name);

// Sorted, nonempty subset of the ground set.
using WinnerSet = std::vector<AltId>;

std::vector<double> borda_vector(std::size_t m);
std::vector<double> plurality_vector(std::size_t m);

// score(a) = sum_j s_j * P(a at position j). The score vector must have one
// entry per alternative and be non-increasing.
std::map<AltId, double> positional_scores(const AnonymousProfile& profile,
                                          std::span<const double> score_vector);

// Total weight of rankings placing a above b.
double pairwise_support(const AnonymousProfile& profile, std::string_view a,
                        std::string_view b);

// Number of alternatives each one beats by strict majority.
std::map<AltId, int> copeland_scores(const AnonymousProfile& profile);

// min over b != a of pairwise_support(a, b); 1 for a singleton ground set.
std::map<AltId, double> maximin_scores(const AnonymousProfile& profile);

struct BucklinScore {
  // Smallest k with P(a in top k) > 1/2. Lower is better.
  std::size_t rank = 0;
  // P(a in top `rank`); larger breaks ties at equal rank.
  double mass = 0.0;
};
std::map<AltId, BucklinScore> bucklin_scores(const AnonymousProfile& profile);

WinnerSet apply_scc(SccKind kind, const AnonymousProfile& profile);

using AltPair = std::pair<AltId, AltId>;

struct SwdReport {
  bool holds = true;
  WinnerSet winners;
  // (a, b) with a swap-dominating b, b a winner, a not.
  std::vector<AltPair> violations;
};

SwdReport check_swd_efficiency(SccKind kind, const AnonymousProfile& profile);

struct StrongSwdViolation {
  AltId dominant;
  AltId dominated;
  // 1: one-way dominance yet the dominated alternative wins.
  // 2: two-way dominance yet exactly one of the pair wins.
  int clause = 0;
};

struct StrongSwdReport {
  bool holds = true;
  WinnerSet winners;
  std::vector<StrongSwdViolation> violations;
};

StrongSwdReport check_strong_swd_efficiency(SccKind kind,
                                            const AnonymousProfile& profile);

struct ExactMode {};
struct MonteCarloMode {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};
using ProfileMode = std::variant<ExactMode, MonteCarloMode>;

struct StabilityReport {
  WinnerSet full_winners;  // f(Pi(A))
  WinnerSet lhs;           // f(Pi(A)) intersected with B
  WinnerSet rhs;           // f(Pi(B))
  // False when lhs is empty; stability then holds vacuously.
  bool applicable = true;
  bool stable = true;
  // Monte-Carlo only: some score gap deciding a winner set is below twice
  // the sampling standard error.
  bool low_confidence = false;
  std::vector<std::string> notes;
};

// Stability of (process, kind) on B within A. Throws UnsupportedExactError
// for exact TM profiles with |A| >= 3, DomainError if B is not a nonempty
// subset of A.
StabilityReport check_stability(const ProcessSpec& spec, SccKind kind,
                                std::span<const Alternative> a,
                                std::span<const AltId> b,
                                const ProfileMode& mode);

// Stability for the consistent process defined by a fixed profile over A:
// Pi(B) is the marginal of `profile` on B.
StabilityReport check_stability(SccKind kind, const AnonymousProfile& profile,
                                std::span<const AltId> b);

}  // namespace swapvote
