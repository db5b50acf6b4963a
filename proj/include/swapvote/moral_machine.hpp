#pragma once

// Feature encoding for Moral-Machine-style alternatives (d = 23).
//
// Layout, schema version 1:
//   [0, 20)  counts per character type, in kMmCharacterNames order
//            (alphabetical)
//   20       relation to the vehicle: 0 = passengers, 1 = pedestrians
//   21       legality: 0 = none, +1 = legal crossing, -1 = illegal crossing
//   22       total number of characters (sum of the 20 counts)

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace swapvote {

inline constexpr int kMmSchemaVersion = 1;
inline constexpr std::size_t kMmCharacterTypes = 20;
inline constexpr std::size_t kMmFeatureDim = 23;
inline constexpr std::size_t kMmRelationIndex = 20;
inline constexpr std::size_t kMmLegalityIndex = 21;
inline constexpr std::size_t kMmTotalIndex = 22;

inline constexpr std::array<std::string_view, kMmCharacterTypes>
    kMmCharacterNames = {
        "boy",           "cat",            "criminal",         "dog",
        "elderly_man",   "elderly_woman",  "female_athlete",   "female_doctor",
        "female_executive", "girl",        "homeless",         "large_man",
        "large_woman",   "male_athlete",   "male_doctor",      "male_executive",
        "man",           "pregnant_woman", "stroller",         "woman"};

enum class MmRelation { kPassengers, kPedestrians };
enum class MmLegality { kNone, kLegal, kIllegal };

// Index of a character type name, or nullopt.
std::optional<std::size_t> mm_character_index(std::string_view name);

// Throws DomainError on a negative count or a counts span that is not
// exactly kMmCharacterTypes long.
std::vector<double> encode_mm_alternative(std::span<const int> counts,
                                          MmRelation relation,
                                          MmLegality legality);

}  // namespace swapvote
