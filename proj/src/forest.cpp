#include "recipesim/forest.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "recipesim/error.hpp"

namespace recipesim {

namespace {

double gini(double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = -1.0;
  bool valid = false;

  bool better_than(const Split& other) const {
    if (!other.valid) return valid;
    if (decrease != other.decrease) return decrease > other.decrease;
    if (feature != other.feature) return feature < other.feature;
    return threshold < other.threshold;
  }
};

void require_both_classes(std::span<const LabeledPair> data, const char* who) {
  std::size_t positives = 0;
  for (const auto& row : data) positives += row.label == 1 ? 1 : 0;
  if (positives == 0 || positives == data.size()) {
    throw InputError(std::string(who) + " needs both classes present");
  }
}

}  // namespace

void DecisionTree::fit(std::span<const LabeledPair> data, const TreeConfig& config) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  fit(data, rows, config, nullptr);
}

void DecisionTree::fit(std::span<const LabeledPair> data, std::span<const std::size_t> rows,
                       const TreeConfig& config, Rng* rng) {
  if (rows.empty()) throw InputError("cannot grow a tree on zero rows");
  if (config.max_features == 0) throw InputError("max_features must be positive");
  if (config.min_leaf == 0) throw InputError("min_leaf must be positive");
  if (config.max_features < kFeatureCount && rng == nullptr) {
    throw InputError("feature subsampling needs a random generator");
  }
  nodes_.clear();
  decrease_ = {};
  std::vector<std::size_t> work(rows.begin(), rows.end());
  grow(data, work, 0, work.size(), 0, config, rng);
}

std::int32_t DecisionTree::grow(std::span<const LabeledPair> data, std::vector<std::size_t>& rows,
                                std::size_t begin, std::size_t end, std::size_t depth,
                                const TreeConfig& config, Rng* rng) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});

  const double total = static_cast<double>(end - begin);
  double positives = 0.0;
  for (std::size_t k = begin; k < end; ++k) positives += data[rows[k]].label;
  nodes_[index].probability = positives / total;

  const double node_impurity = gini(positives, total);
  const bool depth_exhausted = config.max_depth && depth >= *config.max_depth;
  if (node_impurity == 0.0 || end - begin < 2 * config.min_leaf || depth_exhausted) return index;

  std::array<std::size_t, kFeatureCount> order{};
  std::iota(order.begin(), order.end(), 0);
  if (config.max_features < kFeatureCount) rng->shuffle(std::span<std::size_t>(order));

  Split best;
  std::vector<std::size_t> sorted(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                  rows.begin() + static_cast<std::ptrdiff_t>(end));
  for (std::size_t visited = 0; visited < kFeatureCount; ++visited) {
    if (visited >= config.max_features && best.valid) break;
    const std::size_t f = order[visited];
    std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
      return data[a].features[f] < data[b].features[f];
    });
    double left_pos = 0.0;
    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_pos += data[sorted[i]].label;
      const double lo = data[sorted[i]].features[f];
      const double hi = data[sorted[i + 1]].features[f];
      if (lo == hi) continue;
      const std::size_t left_n = i + 1;
      if (left_n < config.min_leaf || n - left_n < config.min_leaf) continue;
      const double ln = static_cast<double>(left_n);
      const double rn = static_cast<double>(n - left_n);
      Split candidate;
      candidate.feature = f;
      candidate.threshold = lo + (hi - lo) / 2.0;
      if (!(candidate.threshold < hi)) candidate.threshold = lo;
      candidate.decrease = total * node_impurity - ln * gini(left_pos, ln) -
                           rn * gini(positives - left_pos, rn);
      candidate.valid = true;
      if (candidate.better_than(best)) best = candidate;
    }
  }
  if (!best.valid) return index;

  const auto mid = std::stable_partition(
      rows.begin() + static_cast<std::ptrdiff_t>(begin),
      rows.begin() + static_cast<std::ptrdiff_t>(end),
      [&](std::size_t r) { return data[r].features[best.feature] <= best.threshold; });
  const auto split_at = static_cast<std::size_t>(mid - rows.begin());

  decrease_[best.feature] += std::max(0.0, best.decrease);
  nodes_[index].feature = static_cast<std::int32_t>(best.feature);
  nodes_[index].threshold = best.threshold;
  const std::int32_t left = grow(data, rows, begin, split_at, depth + 1, config, rng);
  const std::int32_t right = grow(data, rows, split_at, end, depth + 1, config, rng);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

double DecisionTree::predict_probability(const Features& x) const {
  if (nodes_.empty()) throw InputError("decision tree is not trained");
  std::int32_t k = 0;
  while (nodes_[k].feature >= 0) {
    k = x[nodes_[k].feature] <= nodes_[k].threshold ? nodes_[k].left : nodes_[k].right;
  }
  return nodes_[k].probability;
}

RandomForest RandomForest::train(std::span<const LabeledPair> data, const ForestConfig& config) {
  require_both_classes(data, "train_forest");
  if (config.trees == 0) throw InputError("forest needs at least one tree");

  const TreeConfig tree_config{std::min(config.max_features, kFeatureCount), config.min_leaf,
                               config.max_depth};
  RandomForest forest;
  forest.trees_.resize(config.trees);

  const auto build = [&](std::size_t t) {
    Rng rng(derive_seed(config.seed, t));
    std::vector<std::size_t> rows(data.size());
    if (config.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(data.size()));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    forest.trees_[t].fit(data, rows, tree_config, &rng);
  };

  const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, config.trees);
  if (workers == 1) {
    for (std::size_t t = 0; t < config.trees; ++t) build(t);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < config.trees; t += workers) build(t);
      });
    }
  }

  Features sum{};
  std::size_t contributing = 0;
  for (const auto& tree : forest.trees_) {
    const Features& d = tree.impurity_decrease();
    const double total = d[0] + d[1] + d[2];
    if (total <= 0.0) continue;
    for (std::size_t j = 0; j < kFeatureCount; ++j) sum[j] += d[j] / total;
    ++contributing;
  }
  const double total = sum[0] + sum[1] + sum[2];
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    // A forest of single-leaf trees carries no signal; report it as uniform.
    forest.importances_[j] = contributing > 0 && total > 0.0
                                 ? sum[j] / total
                                 : 1.0 / static_cast<double>(kFeatureCount);
  }
  return forest;
}

double RandomForest::predict_probability(const Features& x) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.predict_probability(x);
  return sum / static_cast<double>(trees_.size());
}

}  // namespace recipesim
