#pragma once

// Corpus-level analytics over a score table: descriptive statistics,
// correlations, failure-case rules, lexical-bin agreement and the
// comparison of the two semantic models.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recipesim/fusion.hpp"

namespace recipesim {

enum class Metric { sem_a, sem_b, lexical, nutr_recipe, nutr_ingredient, sem_avg, nutr_avg, fused };

std::string_view metric_name(Metric m);
// Accepts column names plus the rule aliases roberta (sem_a), minilm
// (sem_b), jaccard (lexical) and nutr (nutr_recipe). Throws InputError
// for unknown names.
Metric parse_metric(std::string_view name);
double metric_value(const SimilarityRecord& r, Metric m);
std::vector<double> metric_column(const ScoreTable& table, Metric m);

// Metrics in the order the descriptive and correlation reports list them.
inline constexpr Metric kCoreMetrics[] = {Metric::sem_a, Metric::sem_b, Metric::nutr_recipe,
                                          Metric::lexical, Metric::nutr_ingredient};

struct MetricStats {
  double mean = 0.0;
  double median = 0.0;
  double std_dev = 0.0;  // sample, n - 1
  double skew = 0.0;     // adjusted Fisher-Pearson; 0 for constant columns
  double min = 0.0;
  double max = 0.0;
};

// Needs n >= 3; throws InputError naming the statistic otherwise.
MetricStats descriptive_stats(std::span<const double> values);

// Pearson r, or nullopt when either column is constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  std::vector<Metric> metrics;
  // Undefined (constant-column) rows and columns hold nullopt, diagonal included.
  std::vector<std::vector<std::optional<double>>> r;
};

CorrelationMatrix correlation_matrix(const ScoreTable& table, std::span<const Metric> metrics);

enum class Comparator { less, less_equal, greater, greater_equal };

struct RuleClause {
  Metric metric = Metric::fused;
  Comparator op = Comparator::greater;
  double threshold = 0.0;

  bool holds(const SimilarityRecord& r) const;
};

// A conjunction of clauses.
struct FailureRule {
  std::string name;
  std::vector<RuleClause> clauses;

  bool matches(const SimilarityRecord& r) const;
  std::string criteria() const;  // "nutr_recipe > 0.95, sem_a < 0.6, ..."
};

// "name: metric op threshold, metric op threshold, ..." with op one of
// < <= > >=. Thresholds must lie in [0, 1].
FailureRule parse_rule(std::string_view text);
// One rule per line; blank lines and lines starting with '#' are skipped.
std::vector<FailureRule> parse_rules(std::istream& in);
// nutritional, semantic and lexical rules.
std::vector<FailureRule> default_failure_rules();

enum class Denominator { ordered, unordered };

struct FailureReport {
  std::string rule;
  std::string criteria;
  std::size_t count = 0;
  double percentage = 0.0;  // 100 * count / denominator pairs
  std::vector<std::pair<std::string, std::string>> pairs;
};

// count = matching table rows; the denominator is the pair count of the
// table under the requested convention (an unordered table of m rows has
// 2m ordered pairs).
std::vector<FailureReport> failure_cases(const ScoreTable& table,
                                         std::span<const FailureRule> rules,
                                         Denominator denominator = Denominator::ordered);

struct BinRow {
  double bin_lower = 0.0;
  double bin_upper = 0.0;
  std::optional<double> avg_semantic;
  std::optional<double> avg_nutritional;
  std::optional<double> avg_fused;
  std::size_t count = 0;
};

// Ten lexical bins [0, 0.1), ..., [0.9, 1.0]; empty bins have no means.
std::vector<BinRow> jaccard_bin_agreement(const ScoreTable& table);

struct ModelComparison {
  double mean_abs_diff = 0.0;
  double max_abs_diff = 0.0;
  std::optional<double> pearson_r;
};

// Needs at least 3 rows.
ModelComparison model_comparison(const ScoreTable& table);

// Report writers. Floats use 6 decimals, undefined values print as NA.
void write_descriptive_report(std::ostream& out, const ScoreTable& table);
void write_correlation_report(std::ostream& out, const ScoreTable& table);
void write_failure_report(std::ostream& out, const ScoreTable& table,
                          std::span<const FailureRule> rules, Denominator denominator);
void write_bin_report(std::ostream& out, const ScoreTable& table);
void write_model_comparison_report(std::ostream& out, const ScoreTable& table);

}  // namespace recipesim
