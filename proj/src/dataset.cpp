#include "recipesim/dataset.hpp"

#include <map>
#include <set>

namespace recipesim {

Features features_of(const SimilarityRecord& r) { return {r.sem_avg, r.nutr_avg, r.lexical}; }

GroundTruth join_features(std::span<const AgreedPair> agreed, const ScoreTable& table) {
  std::map<PairKey, const SimilarityRecord*> index;
  for (const auto& r : table.rows) index.emplace(PairKey::canonical(r.main_id, r.secondary_id), &r);

  GroundTruth out;
  for (const auto& a : agreed) {
    const auto it = index.find(a.pair);
    if (it == index.end()) {
      out.missing_scores.push_back(a.pair);
      continue;
    }
    out.pairs.push_back({a.pair, features_of(*it->second), a.label});
  }
  if (!out.missing_scores.empty()) {
    out.warnings.push_back(std::to_string(out.missing_scores.size()) +
                           " agreed pair(s) have no scores and were excluded");
  }
  return out;
}

GroundTruth build_ground_truth(std::span<const Judgment> judgments, const ScoreTable& table) {
  const std::vector<AgreedPair> agreed = agreed_pairs(judgments);
  GroundTruth out = join_features(agreed, table);
  if (agreed.empty()) {
    std::map<PairKey, std::set<std::string>> judges;
    for (const auto& j : judgments) judges[j.pair].insert(j.expert_id);
    bool overlap = false;
    for (const auto& [pair, experts] : judges) overlap = overlap || experts.size() >= 2;
    out.warnings.push_back(overlap ? "experts agreed on no co-judged pair"
                                   : "no pair was judged by two or more experts");
  }
  return out;
}

}  // namespace recipesim
