#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recipesim/dataset.hpp"
#include "recipesim/forest.hpp"
#include "recipesim/logistic.hpp"

namespace recipesim {

enum class ModelKind { logistic, forest };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct ClassMetrics {
  double precision = 0.0;  // 0 when the class is never predicted
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct CVReport {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracy;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;  // population std over folds
  // Indexed by class label, from pooled out-of-fold predictions.
  std::array<ClassMetrics, 2> per_class{};
};

struct ModelSettings {
  LogisticConfig logistic;
  ForestConfig forest;  // forest.seed is replaced per fold
};

// Stratified k-fold cross-validation. Each class is shuffled with the seed
// and dealt round-robin over the folds. Throws InputError when a class has
// fewer than k rows.
CVReport cross_validate(ModelKind kind, std::span<const LabeledPair> data, std::size_t k,
                        std::uint64_t seed, const ModelSettings& settings = {});

// |v_i| / sum |v_j| as percentages. Throws InputError when all are zero.
std::vector<double> normalized_importance(std::span<const double> raw);

struct ImportanceReport {
  Features raw{};  // LR coefficients or Gini importances
  std::vector<double> percent;
};

// Fits the model on all rows and reports its per-feature importance.
ImportanceReport fit_importance(ModelKind kind, std::span<const LabeledPair> data,
                                std::uint64_t seed, const ModelSettings& settings = {});

// Delimited model report: metadata, accuracy, per-class rows, importance rows.
void write_model_report(std::ostream& out, ModelKind kind, const CVReport& cv,
                        const ImportanceReport& importance);

}  // namespace recipesim
