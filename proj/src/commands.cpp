#include "recipesim/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "recipesim/annotation.hpp"
#include "recipesim/dataset.hpp"
#include "recipesim/error.hpp"
#include "recipesim/http_embedding.hpp"

namespace recipesim::cli {

namespace {

std::ofstream open_output(const std::string& path) {
  if (path.empty()) throw InputError("an output path is required");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

}  // namespace

std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingSource& source,
                                                 const std::string& slot_tag) {
  if (!source.file.empty() && !source.service_url.empty()) {
    throw InputError(slot_tag + ": choose an embedding file or a service, not both");
  }
  if (!source.file.empty()) {
    return std::make_unique<FileEmbeddingProvider>(load_embeddings(source.file));
  }
  if (!source.service_url.empty()) {
    HttpEmbeddingConfig config;
    config.url = source.service_url;
    config.model_tag = slot_tag;
    config.dimension = source.service_dimension;
    return std::make_unique<HttpEmbeddingProvider>(config);
  }
  return std::make_unique<FallbackEmbeddingProvider>(source.fallback_dimension,
                                                     source.fallback_seed);
}

IngestSummary run_ingest(const std::string& corpus_path, std::ostream& report) {
  const Corpus corpus = load_corpus(corpus_path);
  IngestSummary summary{corpus.size(), corpus.rejected().size()};
  report << "accepted " << summary.accepted << '\n';
  report << "rejected " << summary.rejected << '\n';
  report << "nutrient_schema";
  for (const auto& name : corpus.nutrient_schema()) report << ' ' << name;
  report << '\n';
  for (const auto& r : corpus.rejected()) {
    report << "line " << r.line_number << ": " << r.reason << '\n';
  }
  return summary;
}

ScoreResult run_score(const ScoreConfig& config) {
  const Corpus corpus = load_corpus(config.corpus_path);
  const auto model_a = make_provider(config.model_a, "model_a");
  const auto model_b = make_provider(config.model_b, "model_b");
  ScoreOptions options;
  options.convention = config.convention;
  options.on_missing = config.on_missing;
  options.workers = config.workers;
  ScoreResult result = score_all(corpus, {*model_a, *model_b}, config.weights, options);

  save_score_table(config.output_path, result.table);
  const std::string skip_path =
      config.skip_report_path.empty() ? config.output_path + ".skipped.csv" : config.skip_report_path;
  if (!result.skipped.empty()) {
    std::ofstream out = open_output(skip_path);
    out << "main_id,secondary_id,reason\n";
    for (const auto& s : result.skipped) {
      out << s.main_id << ',' << s.secondary_id << ",\"" << s.reason << "\"\n";
    }
  } else if (std::filesystem::exists(skip_path)) {
    std::filesystem::remove(skip_path);  // stale report from an earlier run
  }
  return result;
}

std::vector<std::string> run_analyze(const AnalyzeConfig& config) {
  const ScoreTable table = load_score_table(config.table_path);
  if (table.rows.empty()) throw InputError("score table '" + config.table_path + "' is empty");

  std::vector<FailureRule> rules = default_failure_rules();
  if (!config.rules_path.empty()) {
    std::ifstream in(config.rules_path);
    if (!in) throw InputError("cannot open rules file '" + config.rules_path + "'");
    rules = parse_rules(in);
  }
  for (const auto& name : config.reports) {
    if (std::find(std::begin(kReportNames), std::end(kReportNames), name) == std::end(kReportNames)) {
      throw InputError("unknown report '" + name + "'");
    }
  }
  std::filesystem::create_directories(config.output_dir);

  std::vector<std::string> written;
  for (const auto& name : kReportNames) {
    if (std::find(config.reports.begin(), config.reports.end(), name) == config.reports.end()) {
      continue;
    }
    const std::string path = (std::filesystem::path(config.output_dir) / (std::string(name) + ".csv")).string();
    std::ofstream out = open_output(path);
    const std::string_view n = name;
    if (n == "descriptive") {
      write_descriptive_report(out, table);
    } else if (n == "correlation") {
      write_correlation_report(out, table);
    } else if (n == "failures") {
      write_failure_report(out, table, rules, config.denominator);
    } else if (n == "bins") {
      write_bin_report(out, table);
    } else {
      write_model_comparison_report(out, table);
    }
    written.push_back(path);
  }
  return written;
}

void run_train(const TrainConfig& config) {
  const std::vector<AgreedPair> agreed = load_agreed_pairs(config.ground_truth_path);
  const ScoreTable table = load_score_table(config.table_path);
  const GroundTruth truth = join_features(agreed, table);
  if (!truth.missing_scores.empty()) {
    const PairKey& p = truth.missing_scores.front();
    throw InputError("missing features for " + std::to_string(truth.missing_scores.size()) +
                     " ground-truth pair(s), first (" + p.first + ", " + p.second + ")");
  }
  const CVReport cv = cross_validate(config.kind, truth.pairs, config.folds, config.seed,
                                     config.settings);
  const ImportanceReport importance =
      fit_importance(config.kind, truth.pairs, config.seed, config.settings);
  std::ofstream out = open_output(config.output_path);
  write_model_report(out, config.kind, cv, importance);
}

void run_tasks(const TasksConfig& config) {
  const ScoreTable table = load_score_table(config.table_path);
  const CandidateSelection selection = config.k ? CandidateSelection::top_k(*config.k)
                                                : CandidateSelection::fraction(config.fraction.value_or(0.2));
  const TaskSet tasks = create_task_set(table, config.n_mains, selection, config.seed);
  std::ofstream out = open_output(config.output_path);
  write_task_set(out, tasks);
}

void run_embed(const EmbedConfig& config) {
  const Corpus corpus = load_corpus(config.corpus_path);
  FileEmbeddingProvider provider(config.model_tag, config.dimension);
  for (const auto& [id, recipe] : corpus.recipes()) {
    provider.insert(id, fallback_embed(recipe.instruction_text(), config.dimension, config.seed).values);
  }
  std::ofstream out = open_output(config.output_path);
  if (config.binary) {
    write_embeddings_binary(out, provider);
  } else {
    write_embeddings_text(out, provider);
  }
}

}  // namespace recipesim::cli
