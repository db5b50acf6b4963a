#pragma once

// Text file formats. All are comma-separated UTF-8 with a header row; reals
// are written with 17 significant digits so binary64 values round-trip.
//
// Comparisons:   voter_id,c_1..c_d,r_1..r_d
// Alternatives:  id,f_1..f_d
// Profiles:      weight,ranking          (ranking as "a>b>c")
// Curves:        x,mean_accuracy,stderr
// Model files:   see write_model.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swapvote/experiments.hpp"
#include "swapvote/learning.hpp"
#include "swapvote/pipeline.hpp"
#include "swapvote/profile.hpp"

namespace swapvote {

inline constexpr int kModelFormatVersion = 1;

// "%.17g".
std::string format_real(double value);
// Whole-field decimal parse; nullopt on anything else.
std::optional<double> parse_real(std::string_view text);

struct ComparisonRecord {
  std::string voter_id;
  std::vector<double> chosen;
  std::vector<double> rejected;
};

// Throws ParseError (with the 1-based line) on a missing or malformed
// header, ragged rows, empty voter ids or non-numeric fields.
std::vector<ComparisonRecord> parse_comparisons(std::istream& in);
void write_comparisons(std::ostream& out,
                       const std::vector<ComparisonRecord>& records);

std::vector<Alternative> parse_alternatives(std::istream& in);
void write_alternatives(std::ostream& out,
                        const std::vector<Alternative>& alternatives);

AnonymousProfile parse_profile(std::istream& in);
void write_profile(std::ostream& out, const AnonymousProfile& profile);

struct FitMetadata {
  double l2_penalty = 0.0;
  double gradient_tolerance = 0.0;
  int max_iterations = 0;
};

struct VoterModel {
  std::string voter_id;
  std::vector<double> beta;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
};

struct ModelFile {
  enum class Kind { kVoters, kSummary };

  int version = kModelFormatVersion;
  Kind kind = Kind::kVoters;
  std::size_t d = 0;
  FitMetadata fit;
  std::vector<VoterModel> voters;  // kVoters
  SummaryModel summary;            // kSummary
};

// Voters:
//   swapvote-model,1,voters
//   d,<d>
//   l2_penalty,<real>
//   gradient_tolerance,<real>
//   max_iterations,<int>
//   voter_id,converged,iterations,objective,b_1..b_d
//   <one row per voter>
// Summary:
//   swapvote-model,1,summary
//   d,<d>
//   n_voters,<n>
//   l2_penalty,<real>
//   gradient_tolerance,<real>
//   max_iterations,<int>
//   b_1..b_d
//   <one row>
void write_model(std::ostream& out, const ModelFile& model);
// Throws ParseError on an unknown format/version or malformed content.
ModelFile read_model(std::istream& in);

void write_curve(std::ostream& out, const AccuracyCurve& curve);

// Groups records by voter id in first-appearance order.
struct VoterData {
  std::string voter_id;
  std::vector<PairwiseComparison> comparisons;
};
std::vector<VoterData> group_by_voter(const std::vector<ComparisonRecord>& records);

}  // namespace swapvote
