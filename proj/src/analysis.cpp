#include "recipesim/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "recipesim/error.hpp"

namespace recipesim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? format_fixed6(*v) : "NA"; }

std::string_view comparator_text(Comparator op) {
  switch (op) {
    case Comparator::less: return "<";
    case Comparator::less_equal: return "<=";
    case Comparator::greater: return ">";
    case Comparator::greater_equal: return ">=";
  }
  return "?";
}

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::sem_a: return "sem_a";
    case Metric::sem_b: return "sem_b";
    case Metric::lexical: return "lexical";
    case Metric::nutr_recipe: return "nutr_recipe";
    case Metric::nutr_ingredient: return "nutr_ingredient";
    case Metric::sem_avg: return "sem_avg";
    case Metric::nutr_avg: return "nutr_avg";
    case Metric::fused: return "fused";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  name = trim(name);
  static constexpr std::pair<std::string_view, Metric> kNames[] = {
      {"sem_a", Metric::sem_a},
      {"sem_b", Metric::sem_b},
      {"lexical", Metric::lexical},
      {"nutr_recipe", Metric::nutr_recipe},
      {"nutr_ingredient", Metric::nutr_ingredient},
      {"sem_avg", Metric::sem_avg},
      {"nutr_avg", Metric::nutr_avg},
      {"fused", Metric::fused},
      {"roberta", Metric::sem_a},
      {"minilm", Metric::sem_b},
      {"jaccard", Metric::lexical},
      {"nutr", Metric::nutr_recipe},
  };
  for (const auto& [n, m] : kNames) {
    if (n == name) return m;
  }
  throw InputError("unknown metric column '" + std::string(name) + "'");
}

double metric_value(const SimilarityRecord& r, Metric m) {
  switch (m) {
    case Metric::sem_a: return r.sem_a;
    case Metric::sem_b: return r.sem_b;
    case Metric::lexical: return r.lexical;
    case Metric::nutr_recipe: return r.nutr_recipe;
    case Metric::nutr_ingredient: return r.nutr_ingredient;
    case Metric::sem_avg: return r.sem_avg;
    case Metric::nutr_avg: return r.nutr_avg;
    case Metric::fused: return r.fused;
  }
  return 0.0;
}

std::vector<double> metric_column(const ScoreTable& table, Metric m) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) out.push_back(metric_value(r, m));
  return out;
}

MetricStats descriptive_stats(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 1) throw InputError("mean requires at least 1 value");
  if (n < 2) throw InputError("std_dev requires at least 2 values");
  if (n < 3) throw InputError("skew requires at least 3 values");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  MetricStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  s.mean = mean_of(values);
  if (s.min == s.max) {
    s.mean = s.min;
    return s;  // std 0, skew 0
  }

  double m2 = 0.0, m3 = 0.0;
  for (double x : values) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double nd = static_cast<double>(n);
  s.std_dev = std::sqrt(m2 / (nd - 1.0));
  m2 /= nd;
  m3 /= nd;
  const double g1 = m3 / std::pow(m2, 1.5);
  s.skew = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
  return s;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("pearson: columns differ in length");
  if (x.size() < 2) return std::nullopt;
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*xmin == *xmax || *ymin == *ymax) return std::nullopt;

  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const ScoreTable& table, std::span<const Metric> metrics) {
  if (table.rows.size() < 3) throw InputError("correlation_matrix requires at least 3 rows");
  CorrelationMatrix out;
  out.metrics.assign(metrics.begin(), metrics.end());
  std::vector<std::vector<double>> columns;
  for (Metric m : metrics) columns.push_back(metric_column(table, m));

  const std::size_t k = metrics.size();
  out.r.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::optional<double> r = pearson(columns[i], columns[j]);
      if (i == j && r) r = 1.0;
      out.r[i][j] = r;
      out.r[j][i] = r;
    }
  }
  return out;
}

bool RuleClause::holds(const SimilarityRecord& r) const {
  const double v = metric_value(r, metric);
  switch (op) {
    case Comparator::less: return v < threshold;
    case Comparator::less_equal: return v <= threshold;
    case Comparator::greater: return v > threshold;
    case Comparator::greater_equal: return v >= threshold;
  }
  return false;
}

bool FailureRule::matches(const SimilarityRecord& r) const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [&](const RuleClause& c) { return c.holds(r); });
}

std::string FailureRule::criteria() const {
  std::string out;
  for (const auto& c : clauses) {
    if (!out.empty()) out += ", ";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, c.threshold);
    out += std::string(metric_name(c.metric)) + ' ' + std::string(comparator_text(c.op)) + ' ' +
           std::string(buf, res.ptr);
  }
  return out;
}

FailureRule parse_rule(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("rule needs 'name: clause, ...': '" + std::string(text) + "'");
  }
  FailureRule rule;
  rule.name = std::string(trim(text.substr(0, colon)));
  if (rule.name.empty()) throw InputError("rule name must not be empty");

  std::string_view rest = text.substr(colon + 1);
  while (!trim(rest).empty()) {
    const auto comma = rest.find(',');
    const std::string_view clause = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);

    const auto op_pos = clause.find_first_of("<>");
    if (op_pos == std::string_view::npos) {
      throw InputError("rule clause lacks a comparator: '" + std::string(clause) + "'");
    }
    RuleClause c;
    c.metric = parse_metric(clause.substr(0, op_pos));
    std::size_t value_pos = op_pos + 1;
    const bool or_equal = value_pos < clause.size() && clause[value_pos] == '=';
    if (or_equal) ++value_pos;
    if (clause[op_pos] == '<') {
      c.op = or_equal ? Comparator::less_equal : Comparator::less;
    } else {
      c.op = or_equal ? Comparator::greater_equal : Comparator::greater;
    }
    const std::string_view number = trim(clause.substr(value_pos));
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), c.threshold);
    if (ec != std::errc() || ptr != number.data() + number.size()) {
      throw InputError("bad rule threshold '" + std::string(number) + "'");
    }
    if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) {
      throw InputError("rule threshold must lie in [0, 1]");
    }
    rule.clauses.push_back(c);
  }
  if (rule.clauses.empty()) throw InputError("rule '" + rule.name + "' has no clauses");
  return rule;
}

std::vector<FailureRule> parse_rules(std::istream& in) {
  std::vector<FailureRule> rules;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    rules.push_back(parse_rule(t));
  }
  return rules;
}

std::vector<FailureRule> default_failure_rules() {
  return {
      parse_rule("nutritional: nutr > 0.95, roberta < 0.6, jaccard < 0.1"),
      parse_rule("semantic: roberta > 0.85, jaccard < 0.1, nutr < 0.2"),
      parse_rule("lexical: jaccard > 0.3, roberta < 0.6"),
  };
}

std::vector<FailureReport> failure_cases(const ScoreTable& table,
                                         std::span<const FailureRule> rules,
                                         Denominator denominator) {
  double pairs = static_cast<double>(table.rows.size());
  if (table.convention == PairConvention::unordered && denominator == Denominator::ordered) {
    pairs *= 2.0;
  } else if (table.convention == PairConvention::ordered &&
             denominator == Denominator::unordered) {
    pairs /= 2.0;
  }

  std::vector<FailureReport> out;
  for (const auto& rule : rules) {
    FailureReport report;
    report.rule = rule.name;
    report.criteria = rule.criteria();
    for (const auto& r : table.rows) {
      if (rule.matches(r)) report.pairs.emplace_back(r.main_id, r.secondary_id);
    }
    report.count = report.pairs.size();
    report.percentage = pairs > 0.0 ? 100.0 * static_cast<double>(report.count) / pairs : 0.0;
    out.push_back(std::move(report));
  }
  return out;
}

std::vector<BinRow> jaccard_bin_agreement(const ScoreTable& table) {
  struct Acc {
    double sem = 0.0, nutr = 0.0, fused = 0.0;
    std::size_t count = 0;
  };
  std::vector<Acc> acc(10);
  for (const auto& r : table.rows) {
    // Small epsilon keeps exact decile edges such as 0.3 out of the bin below.
    auto bin = static_cast<std::size_t>(std::floor(r.lexical * 10.0 + 1e-9));
    bin = std::min<std::size_t>(bin, 9);
    acc[bin].sem += r.sem_avg;
    acc[bin].nutr += r.nutr_avg;
    acc[bin].fused += r.fused;
    ++acc[bin].count;
  }
  std::vector<BinRow> rows;
  for (std::size_t b = 0; b < 10; ++b) {
    BinRow row;
    row.bin_lower = static_cast<double>(b) / 10.0;
    row.bin_upper = static_cast<double>(b + 1) / 10.0;
    row.count = acc[b].count;
    if (row.count > 0) {
      const double n = static_cast<double>(row.count);
      row.avg_semantic = acc[b].sem / n;
      row.avg_nutritional = acc[b].nutr / n;
      row.avg_fused = acc[b].fused / n;
    }
    rows.push_back(row);
  }
  return rows;
}

ModelComparison model_comparison(const ScoreTable& table) {
  if (table.rows.size() < 3) throw InputError("model_comparison requires at least 3 rows");
  ModelComparison out;
  double sum = 0.0;
  for (const auto& r : table.rows) {
    const double d = std::abs(r.sem_a - r.sem_b);
    sum += d;
    out.max_abs_diff = std::max(out.max_abs_diff, d);
  }
  out.mean_abs_diff = sum / static_cast<double>(table.rows.size());
  out.pearson_r = pearson(metric_column(table, Metric::sem_a), metric_column(table, Metric::sem_b));
  return out;
}

void write_descriptive_report(std::ostream& out, const ScoreTable& table) {
  out << "metric,mean,median,std_dev,skew,min,max\n";
  for (Metric m : kCoreMetrics) {
    const MetricStats s = descriptive_stats(metric_column(table, m));
    out << metric_name(m);
    for (double v : {s.mean, s.median, s.std_dev, s.skew, s.min, s.max}) {
      out << ',' << format_fixed6(v);
    }
    out << '\n';
  }
}

void write_correlation_report(std::ostream& out, const ScoreTable& table) {
  const CorrelationMatrix cm = correlation_matrix(table, kCoreMetrics);
  out << "metric";
  for (Metric m : cm.metrics) out << ',' << metric_name(m);
  out << '\n';
  for (std::size_t i = 0; i < cm.metrics.size(); ++i) {
    out << metric_name(cm.metrics[i]);
    for (const auto& v : cm.r[i]) out << ',' << fmt_opt(v);
    out << '\n';
  }
}

void write_failure_report(std::ostream& out, const ScoreTable& table,
                          std::span<const FailureRule> rules, Denominator denominator) {
  out << "rule,criteria,count,percentage\n";
  for (const auto& f : failure_cases(table, rules, denominator)) {
    out << f.rule << ",\"" << f.criteria << "\"," << f.count << ',' << format_fixed6(f.percentage)
        << '\n';
  }
}

void write_bin_report(std::ostream& out, const ScoreTable& table) {
  out << "bin_lower,bin_upper,avg_semantic,avg_nutritional,avg_fused,count\n";
  for (const auto& b : jaccard_bin_agreement(table)) {
    out << format_fixed6(b.bin_lower) << ',' << format_fixed6(b.bin_upper) << ','
        << fmt_opt(b.avg_semantic) << ',' << fmt_opt(b.avg_nutritional) << ','
        << fmt_opt(b.avg_fused) << ',' << b.count << '\n';
  }
}

void write_model_comparison_report(std::ostream& out, const ScoreTable& table) {
  const ModelComparison c = model_comparison(table);
  out << "statistic,value\n";
  out << "mean_abs_diff," << format_fixed6(c.mean_abs_diff) << '\n';
  out << "max_abs_diff," << format_fixed6(c.max_abs_diff) << '\n';
  out << "pearson_r," << fmt_opt(c.pearson_r) << '\n';
}

}  // namespace recipesim
