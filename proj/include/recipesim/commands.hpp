#pragma once

// Operator commands behind the recipesim CLI. Each returns normally on
// success and throws InputError for bad inputs.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "recipesim/analysis.hpp"
#include "recipesim/evaluation.hpp"
#include "recipesim/fusion.hpp"
#include "recipesim/semantic.hpp"

namespace recipesim::cli {

// Where one embedding slot's vectors come from. Exactly one source is used:
// a file, an HTTP service, or the deterministic fallback embedder.
struct EmbeddingSource {
  std::string file;
  std::string service_url;
  std::size_t service_dimension = 0;
  std::size_t fallback_dimension = 384;
  std::uint64_t fallback_seed = 0;
};

inline EmbeddingSource fallback_source(std::size_t dimension, std::uint64_t seed) {
  EmbeddingSource s;
  s.fallback_dimension = dimension;
  s.fallback_seed = seed;
  return s;
}

std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingSource& source,
                                                 const std::string& slot_tag);

struct IngestSummary {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Validates a corpus and prints a report (counts, then one line per
// rejected record).
IngestSummary run_ingest(const std::string& corpus_path, std::ostream& report);

struct ScoreConfig {
  std::string corpus_path;
  EmbeddingSource model_a = fallback_source(384, 0);
  EmbeddingSource model_b = fallback_source(256, 1);
  FusionWeights weights;
  PairConvention convention = PairConvention::unordered;
  MissingPolicy on_missing = MissingPolicy::skip;
  std::size_t workers = 1;
  std::string output_path;
  // Written only when pairs were skipped; defaults to <output>.skipped.csv.
  std::string skip_report_path;
};

ScoreResult run_score(const ScoreConfig& config);

inline constexpr const char* kReportNames[] = {"descriptive", "correlation", "failures", "bins",
                                               "models"};

struct AnalyzeConfig {
  std::string table_path;
  std::string rules_path;  // empty: default failure rules
  std::string output_dir;
  std::vector<std::string> reports = {std::begin(kReportNames), std::end(kReportNames)};
  Denominator denominator = Denominator::ordered;
};

// Writes <report>.csv files into output_dir and returns their paths.
std::vector<std::string> run_analyze(const AnalyzeConfig& config);

struct TrainConfig {
  std::string ground_truth_path;
  std::string table_path;
  ModelKind kind = ModelKind::logistic;
  std::uint64_t seed = 42;
  std::size_t folds = 5;
  ModelSettings settings;
  std::string output_path;
};

// Throws InputError when a ground-truth pair has no scores.
void run_train(const TrainConfig& config);

struct TasksConfig {
  std::string table_path;
  std::size_t n_mains = 100;
  std::optional<double> fraction = 0.2;
  std::optional<std::size_t> k;
  std::uint64_t seed = 42;
  std::string output_path;
};

void run_tasks(const TasksConfig& config);

struct EmbedConfig {
  std::string corpus_path;
  std::size_t dimension = 384;
  std::uint64_t seed = 0;
  std::string model_tag = "fallback";
  bool binary = false;
  std::string output_path;
};

// Writes fallback embeddings for every recipe in the embedding file format.
void run_embed(const EmbedConfig& config);

}  // namespace recipesim::cli
