#include "swapvote/moral_machine.hpp"

#include <string>

#include "swapvote/errors.hpp"

namespace swapvote {

std::optional<std::size_t> mm_character_index(std::string_view name) {
  for (std::size_t i = 0; i < kMmCharacterNames.size(); ++i) {
    if (kMmCharacterNames[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<double> encode_mm_alternative(std::span<const int> counts,
                                          MmRelation relation,
                                          MmLegality legality) {
  if (counts.size() != kMmCharacterTypes) {
    throw DomainError("expected " + std::to_string(kMmCharacterTypes) +
                      " character counts, got " + std::to_string(counts.size()));
  }
  std::vector<double> features(kMmFeatureDim, 0.0);
  long total = 0;
  for (std::size_t i = 0; i < kMmCharacterTypes; ++i) {
    if (counts[i] < 0) {
      throw DomainError("negative count for " +
                        std::string(kMmCharacterNames[i]));
    }
    features[i] = counts[i];
    total += counts[i];
  }
  features[kMmRelationIndex] = relation == MmRelation::kPedestrians ? 1.0 : 0.0;
  switch (legality) {
    case MmLegality::kNone: features[kMmLegalityIndex] = 0.0; break;
    case MmLegality::kLegal: features[kMmLegalityIndex] = 1.0; break;
    case MmLegality::kIllegal: features[kMmLegalityIndex] = -1.0; break;
  }
  features[kMmTotalIndex] = static_cast<double>(total);
  return features;
}

}  // namespace swapvote
