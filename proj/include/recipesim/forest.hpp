#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recipesim/dataset.hpp"
#include "recipesim/rng.hpp"

namespace recipesim {

struct TreeConfig {
  // Features inspected per split. When none of them yields a valid split,
  // the search continues through the remaining features.
  std::size_t max_features = kFeatureCount;
  std::size_t min_leaf = 1;
  std::optional<std::size_t> max_depth;
};

// Binary CART classifier grown on Gini impurity. Splits send x <= threshold
// left. Among equally good splits the smallest (feature, threshold) wins,
// so the result does not depend on the order features were sampled in.
class DecisionTree {
 public:
  // `rows` indexes into data and may repeat (bootstrap). `rng` is only used
  // when config.max_features < kFeatureCount.
  void fit(std::span<const LabeledPair> data, std::span<const std::size_t> rows,
           const TreeConfig& config, Rng* rng = nullptr);
  void fit(std::span<const LabeledPair> data, const TreeConfig& config = {});

  // Fraction of class-1 training rows in the leaf reached by x.
  double predict_probability(const Features& x) const;
  int predict_label(const Features& x) const { return predict_probability(x) > 0.5 ? 1 : 0; }

  // Total weighted Gini decrease per feature, in row-count units.
  const Features& impurity_decrease() const { return decrease_; }
  std::size_t node_count() const { return nodes_.size(); }

  bool operator==(const DecisionTree&) const = default;

 private:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double probability = 0.0;

    bool operator==(const Node&) const = default;
  };

  std::int32_t grow(std::span<const LabeledPair> data, std::vector<std::size_t>& rows,
                    std::size_t begin, std::size_t end, std::size_t depth, const TreeConfig& config,
                    Rng* rng);

  std::vector<Node> nodes_;
  Features decrease_{};
};

struct ForestConfig {
  std::size_t trees = 100;
  std::size_t max_features = 1;  // floor(sqrt(3))
  std::size_t min_leaf = 1;
  std::optional<std::size_t> max_depth;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  // Trees are seeded per index, so the forest is identical for any count.
  std::size_t workers = 1;
};

class RandomForest {
 public:
  // Throws InputError when only one class is present.
  static RandomForest train(std::span<const LabeledPair> data, const ForestConfig& config = {});

  // Mean of the trees' leaf probabilities.
  double predict_probability(const Features& x) const;
  int predict_label(const Features& x) const { return predict_probability(x) > 0.5 ? 1 : 0; }

  // Gini importance: each tree's impurity decreases normalized to 1, averaged
  // over trees that split at all, then normalized to sum to 1.
  const Features& importances() const { return importances_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
  Features importances_{};
};

}  // namespace recipesim
