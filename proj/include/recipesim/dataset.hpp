#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recipesim/fusion.hpp"
#include "recipesim/judgment.hpp"

namespace recipesim {

inline constexpr std::size_t kFeatureCount = 3;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {"sem_avg", "nutr_avg",
                                                                             "lexical"};

// (sem_avg, nutr_avg, lexical), each in [0, 1].
using Features = std::array<double, kFeatureCount>;

struct LabeledPair {
  PairKey pair;
  Features features{};
  int label = 0;  // 1 = similar
};

struct GroundTruth {
  std::vector<LabeledPair> pairs;
  // Agreed pairs that have no row in the score table.
  std::vector<PairKey> missing_scores;
  std::vector<std::string> warnings;
};

Features features_of(const SimilarityRecord& r);

// Attaches score-table features to agreed pairs.
GroundTruth join_features(std::span<const AgreedPair> agreed, const ScoreTable& table);

// Unanimous co-judged pairs joined with their features. Warns when no pair
// was judged by two or more experts.
GroundTruth build_ground_truth(std::span<const Judgment> judgments, const ScoreTable& table);

}  // namespace recipesim
