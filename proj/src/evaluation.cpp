#include "recipesim/evaluation.hpp"

#include <cmath>
#include <ostream>

#include "recipesim/error.hpp"
#include "recipesim/rng.hpp"

namespace recipesim {

std::string_view model_kind_name(ModelKind kind) {
  return kind == ModelKind::logistic ? "logistic" : "forest";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "logistic" || name == "lr") return ModelKind::logistic;
  if (name == "forest" || name == "rf") return ModelKind::forest;
  throw InputError("unknown model kind '" + std::string(name) + "'");
}

CVReport cross_validate(ModelKind kind, std::span<const LabeledPair> data, std::size_t k,
                        std::uint64_t seed, const ModelSettings& settings) {
  if (k < 2) throw InputError("cross-validation needs k >= 2");
  if (data.size() < k) throw InputError("cross-validation needs at least k rows");

  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].label == 1 ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < k) {
      throw InputError("class " + std::to_string(c) + " has " +
                       std::to_string(by_class[c].size()) + " rows, too few to stratify into " +
                       std::to_string(k) + " folds");
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> fold_of(data.size());
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t p = 0; p < members.size(); ++p) fold_of[members[p]] = p % k;
  }

  CVReport report;
  report.folds = k;
  report.seed = seed;
  std::vector<int> predicted(data.size(), 0);
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<LabeledPair> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] == fold) {
        test.push_back(i);
      } else {
        train.push_back(data[i]);
      }
    }
    if (kind == ModelKind::logistic) {
      const LogisticModel model = train_logistic(train, settings.logistic);
      for (std::size_t i : test) predicted[i] = predict_label(model, data[i].features);
    } else {
      ForestConfig config = settings.forest;
      config.seed = derive_seed(seed, fold);
      const RandomForest forest = RandomForest::train(train, config);
      for (std::size_t i : test) predicted[i] = forest.predict_label(data[i].features);
    }
    std::size_t correct = 0;
    for (std::size_t i : test) correct += predicted[i] == data[i].label ? 1 : 0;
    report.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }

  double sum = 0.0;
  for (double a : report.fold_accuracy) sum += a;
  report.accuracy_mean = sum / static_cast<double>(k);
  double ss = 0.0;
  for (double a : report.fold_accuracy) ss += (a - report.accuracy_mean) * (a - report.accuracy_mean);
  report.accuracy_std = std::sqrt(ss / static_cast<double>(k));

  for (int c = 0; c < 2; ++c) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const bool actual = data[i].label == c, guess = predicted[i] == c;
      tp += actual && guess ? 1 : 0;
      fp += !actual && guess ? 1 : 0;
      fn += actual && !guess ? 1 : 0;
    }
    ClassMetrics& m = report.per_class[c];
    m.support = tp + fn;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
  }
  return report;
}

std::vector<double> normalized_importance(std::span<const double> raw) {
  if (raw.empty()) throw InputError("normalized_importance needs at least one value");
  double total = 0.0;
  for (double v : raw) total += std::abs(v);
  if (total == 0.0) throw InputError("normalized_importance: all values are zero");
  std::vector<double> out;
  out.reserve(raw.size());
  for (double v : raw) out.push_back(100.0 * std::abs(v) / total);
  return out;
}

ImportanceReport fit_importance(ModelKind kind, std::span<const LabeledPair> data,
                                std::uint64_t seed, const ModelSettings& settings) {
  ImportanceReport report;
  if (kind == ModelKind::logistic) {
    report.raw = train_logistic(data, settings.logistic).coefficients;
  } else {
    ForestConfig config = settings.forest;
    config.seed = seed;
    report.raw = RandomForest::train(data, config).importances();
  }
  report.percent = normalized_importance(report.raw);
  return report;
}

void write_model_report(std::ostream& out, ModelKind kind, const CVReport& cv,
                        const ImportanceReport& importance) {
  out << "section,key,value\n";
  out << "meta,model," << model_kind_name(kind) << '\n';
  out << "meta,folds," << cv.folds << '\n';
  out << "meta,seed," << cv.seed << '\n';
  out << "accuracy,mean," << format_fixed6(cv.accuracy_mean) << '\n';
  out << "accuracy,std," << format_fixed6(cv.accuracy_std) << '\n';
  for (std::size_t f = 0; f < cv.fold_accuracy.size(); ++f) {
    out << "accuracy,fold_" << f << ',' << format_fixed6(cv.fold_accuracy[f]) << '\n';
  }
  out << "\nclass,precision,recall,f1,support\n";
  for (int c = 0; c < 2; ++c) {
    const ClassMetrics& m = cv.per_class[c];
    out << c << ',' << format_fixed6(m.precision) << ',' << format_fixed6(m.recall) << ','
        << format_fixed6(m.f1) << ',' << m.support << '\n';
  }
  out << "\nfeature," << (kind == ModelKind::logistic ? "coefficient" : "gini_importance")
      << ",normalized_pct\n";
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    out << kFeatureNames[j] << ',' << format_fixed6(importance.raw[j]) << ','
        << format_fixed6(importance.percent[j]) << '\n';
  }
}

}  // namespace recipesim
