#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "recipesim/dataset.hpp"
#include "recipesim/error.hpp"
#include "recipesim/evaluation.hpp"
#include "recipesim/forest.hpp"
#include "recipesim/logistic.hpp"
#include "support.hpp"

using namespace recipesim;

namespace {

std::vector<LabeledPair> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledPair p;
    p.pair = {"m" + std::to_string(i), "s" + std::to_string(i)};
    p.features = {rng.uniform(), rng.uniform(), rng.uniform()};
    p.label = i % 2 == 0 ? 1 : 0;
    out.push_back(p);
  }
  return out;
}

// Gradient of sum log-loss + (l2/2)|w|^2, computed directly in long double.
std::array<long double, 4> objective_gradient(const std::vector<LabeledPair>& data,
                                              const LogisticModel& m, double l2) {
  std::array<long double, 4> g{};
  for (const auto& p : data) {
    long double z = m.intercept;
    for (std::size_t j = 0; j < 3; ++j) z += static_cast<long double>(m.coefficients[j]) * p.features[j];
    const long double prob = 1.0L / (1.0L + std::exp(-z));
    const long double r = prob - p.label;
    for (std::size_t j = 0; j < 3; ++j) g[j] += r * p.features[j];
    g[3] += r;
  }
  for (std::size_t j = 0; j < 3; ++j) g[j] += l2 * m.coefficients[j];
  return g;
}

double accuracy(const RandomForest& f, const std::vector<LabeledPair>& data) {
  std::size_t ok = 0;
  for (const auto& p : data) ok += f.predict_label(p.features) == p.label;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

}  // namespace

TEST(Logistic, SeparatesOnLexicalFeature) {
  const auto data = testsupport::lexical_separable(300, 61);
  const LogisticModel m = train_logistic(data);
  EXPECT_TRUE(m.converged);
  EXPECT_GT(m.coefficients[2], 0.0);
  EXPECT_GT(std::abs(m.coefficients[2]), 5 * std::abs(m.coefficients[0]));
  EXPECT_GT(std::abs(m.coefficients[2]), 5 * std::abs(m.coefficients[1]));
  EXPECT_GE(cross_validate(ModelKind::logistic, data, 5, 42).accuracy_mean, 0.95);
}

TEST(Logistic, StationaryPointOfObjective) {
  for (double l2 : {0.1, 1.0, 10.0}) {
    const auto data = testsupport::lexical_separable(200, 62);
    LogisticConfig cfg;
    cfg.l2_strength = l2;
    const LogisticModel m = train_logistic(data, cfg);
    const auto g = objective_gradient(data, m, l2);
    long double sq = 0;
    for (auto x : g) sq += x * x;
    EXPECT_LT(std::sqrt(static_cast<double>(sq)), 1e-6) << "l2 " << l2;
  }
}

TEST(Logistic, RowOrderDoesNotMatter) {
  auto data = testsupport::lexical_separable(120, 63);
  const LogisticModel a = train_logistic(data);
  Rng rng(1);
  rng.shuffle(std::span(data));
  const LogisticModel b = train_logistic(data);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.coefficients[j], b.coefficients[j], 1e-9);
  EXPECT_NEAR(a.intercept, b.intercept, 1e-9);
}

TEST(Logistic, NoSignalStaysNearChance) {
  const auto report = cross_validate(ModelKind::logistic, noise(400, 64), 5, 42);
  EXPECT_GT(report.accuracy_mean, 0.35);
  EXPECT_LT(report.accuracy_mean, 0.65);
}

TEST(Logistic, InputErrors) {
  auto data = testsupport::lexical_separable(9, 65);
  EXPECT_THROW(train_logistic(data), InputError);
  data = testsupport::lexical_separable(50, 65);
  for (auto& p : data) p.label = 1;
  EXPECT_THROW(train_logistic(data), InputError);
}

TEST(DecisionTree, HandTracedSplit) {
  std::vector<LabeledPair> data;
  for (double lex : {0.1, 0.2}) data.push_back({{"a", "b"}, {0.5, 0.5, lex}, 0});
  for (double lex : {0.8, 0.9}) data.push_back({{"a", "b"}, {0.5, 0.5, lex}, 1});
  DecisionTree t;
  t.fit(data);
  EXPECT_EQ(t.node_count(), 3u);
  // Root Gini 0.5 over 4 rows, pure children.
  EXPECT_DOUBLE_EQ(t.impurity_decrease()[2], 2.0);
  EXPECT_EQ(t.impurity_decrease()[0], 0.0);
  EXPECT_EQ(t.predict_label({0.5, 0.5, 0.3}), 0);
  EXPECT_EQ(t.predict_label({0.5, 0.5, 0.7}), 1);
}

TEST(DecisionTree, FitsDistinctTrainingRowsExactly) {
  const auto data = noise(200, 66);
  DecisionTree t;
  t.fit(data);
  for (const auto& p : data) EXPECT_EQ(t.predict_label(p.features), p.label);

  TreeConfig stump;
  stump.max_depth = 1;
  DecisionTree s;
  s.fit(data, stump);
  EXPECT_LE(s.node_count(), 3u);
}

TEST(RandomForest, SingleFullTreeEqualsCart) {
  const auto data = testsupport::lexical_separable(150, 67);
  ForestConfig cfg;
  cfg.trees = 1;
  cfg.bootstrap = false;
  cfg.max_features = kFeatureCount;
  const RandomForest f = RandomForest::train(data, cfg);
  DecisionTree t;
  t.fit(data);
  ASSERT_EQ(f.trees().size(), 1u);
  EXPECT_TRUE(f.trees()[0] == t);
}

TEST(RandomForest, ImportanceSumsToOneAndFindsSignal) {
  const auto data = testsupport::lexical_separable(300, 68);
  ForestConfig cfg;
  cfg.seed = 7;
  const RandomForest f = RandomForest::train(data, cfg);
  const Features& imp = f.importances();
  EXPECT_NEAR(imp[0] + imp[1] + imp[2], 1.0, 1e-9);
  EXPECT_GT(imp[2], 0.8);
  EXPECT_GE(accuracy(f, data), 0.95);
}

TEST(RandomForest, DeterministicAcrossRunsAndWorkers) {
  const auto data = testsupport::lexical_separable(300, 69);
  ForestConfig cfg;
  cfg.seed = 11;
  const RandomForest a = RandomForest::train(data, cfg);
  cfg.workers = 4;
  const RandomForest b = RandomForest::train(data, cfg);
  EXPECT_TRUE(a.trees() == b.trees());
  EXPECT_EQ(a.importances(), b.importances());
  cfg.seed = 12;
  EXPECT_FALSE(RandomForest::train(data, cfg).trees() == a.trees());
}

TEST(CrossValidation, FoldsAndBounds) {
  const auto data = testsupport::lexical_separable(300, 70);
  for (ModelKind kind : {ModelKind::logistic, ModelKind::forest}) {
    const CVReport r = cross_validate(kind, data, 5, 42);
    ASSERT_EQ(r.fold_accuracy.size(), 5u);
    const double mean = std::accumulate(r.fold_accuracy.begin(), r.fold_accuracy.end(), 0.0) / 5;
    double var = 0;
    for (double a : r.fold_accuracy) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
      var += (a - mean) * (a - mean);
    }
    EXPECT_NEAR(r.accuracy_mean, mean, 1e-12);
    EXPECT_NEAR(r.accuracy_std, std::sqrt(var / 5), 1e-12);
    EXPECT_EQ(r.per_class[0].support + r.per_class[1].support, 300u);
    EXPECT_GE(r.accuracy_mean, 0.95);
  }
}

TEST(CrossValidation, Errors) {
  auto data = testsupport::lexical_separable(40, 71);
  EXPECT_THROW(cross_validate(ModelKind::logistic, data, 100, 1), InputError);
  EXPECT_THROW(cross_validate(ModelKind::logistic, data, 1, 1), InputError);
  data.resize(3);
  EXPECT_THROW(cross_validate(ModelKind::forest, data, 5, 1), InputError);
}

TEST(CrossValidation, SeedControlsResult) {
  const auto data = noise(200, 72);
  const CVReport a = cross_validate(ModelKind::forest, data, 5, 3);
  const CVReport b = cross_validate(ModelKind::forest, data, 5, 3);
  EXPECT_EQ(a.fold_accuracy, b.fold_accuracy);
}

TEST(Importance, PublishedCoefficientsNormalize) {
  const std::vector<double> raw{1.986991, 0.087156, 0.063678};
  const auto pct = normalized_importance(raw);
  EXPECT_NEAR(pct[0], 92.9, 0.05);
  EXPECT_NEAR(pct[1], 4.1, 0.05);
  EXPECT_NEAR(pct[2], 3.0, 0.05);
  const std::vector<double> signs{-1, 1, 2};
  EXPECT_DOUBLE_EQ(normalized_importance(signs)[0], 25.0);
  const std::vector<double> zero{0, 0, 0};
  EXPECT_THROW(normalized_importance(zero), InputError);
}

TEST(Importance, ForestPercentagesSumToHundred) {
  const auto r = fit_importance(ModelKind::forest, testsupport::lexical_separable(300, 73), 5);
  EXPECT_NEAR(r.percent[0] + r.percent[1] + r.percent[2], 100.0, 1e-9);
  EXPECT_GT(r.percent[2], 80.0);
}

TEST(GroundTruth, UnanimousCoJudgedPairsOnly) {
  ScoreTable t;
  t.rows.push_back(make_record("a", "b", {0.2, 0.4, 0.5, 0.6, 0.8}, FusionWeights{}));
  t.rows.push_back(make_record("a", "c", {0.1, 0.1, 0.1, 0.1, 0.1}, FusionWeights{}));
  t.rows.push_back(make_record("b", "c", {0.9, 0.9, 0.9, 0.9, 0.9}, FusionWeights{}));
  const std::vector<Judgment> js{
      {"x", {"a", "b"}, Verdict::similar, 1},     {"y", {"a", "b"}, Verdict::similar, 2},
      {"x", {"a", "c"}, Verdict::similar, 3},     {"y", {"a", "c"}, Verdict::not_similar, 4},
      {"x", {"b", "c"}, Verdict::not_similar, 5},
  };
  const GroundTruth gt = build_ground_truth(js, t);
  ASSERT_EQ(gt.pairs.size(), 1u);
  EXPECT_EQ(gt.pairs[0].pair, (PairKey{"a", "b"}));
  EXPECT_EQ(gt.pairs[0].label, 1);
  EXPECT_DOUBLE_EQ(gt.pairs[0].features[0], 0.3);
  EXPECT_DOUBLE_EQ(gt.pairs[0].features[1], 0.7);
  EXPECT_DOUBLE_EQ(gt.pairs[0].features[2], 0.5);

  const std::vector<Judgment> solo{{"x", {"a", "b"}, Verdict::similar, 1}};
  const GroundTruth none = build_ground_truth(solo, t);
  EXPECT_TRUE(none.pairs.empty());
  ASSERT_EQ(none.warnings.size(), 1u);
  EXPECT_NE(none.warnings[0].find("two or more"), std::string::npos);
}

TEST(GroundTruth, JoinReportsMissingScores) {
  ScoreTable t;
  t.rows.push_back(make_record("a", "b", {0.2, 0.4, 0.5, 0.6, 0.8}, FusionWeights{}));
  const std::vector<AgreedPair> agreed{{{"a", "b"}, 1}, {{"a", "z"}, 0}};
  const GroundTruth gt = join_features(agreed, t);
  EXPECT_EQ(gt.pairs.size(), 1u);
  ASSERT_EQ(gt.missing_scores.size(), 1u);
  EXPECT_EQ(gt.missing_scores[0], (PairKey{"a", "z"}));
  EXPECT_FALSE(gt.warnings.empty());
}

TEST(ModelReport, DeterministicForSeed) {
  const auto data = testsupport::lexical_separable(300, 74);
  auto render = [&](ModelKind kind) {
    std::ostringstream out;
    write_model_report(out, kind, cross_validate(kind, data, 5, 42), fit_importance(kind, data, 42));
    return out.str();
  };
  for (ModelKind kind : {ModelKind::logistic, ModelKind::forest}) {
    const std::string a = render(kind);
    EXPECT_EQ(a, render(kind));
    EXPECT_EQ(a.substr(0, a.find('\n')), "section,key,value");
    EXPECT_NE(a.find("lexical,"), std::string::npos);
  }
  EXPECT_EQ(parse_model_kind("rf"), ModelKind::forest);
  EXPECT_EQ(parse_model_kind("logistic"), ModelKind::logistic);
  EXPECT_THROW(parse_model_kind("svm"), InputError);
}
