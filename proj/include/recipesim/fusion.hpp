#pragma once

// Pairwise scoring over a corpus and weighted fusion of the three views
// (semantic, lexical, nutritional).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "recipesim/corpus.hpp"
#include "recipesim/semantic.hpp"

namespace recipesim {

// View weights, nonnegative and summing to 1 (within 1e-9).
class FusionWeights {
 public:
  FusionWeights() = default;  // 1/3 each
  // Throws InputError on negative weights or a sum away from 1.
  FusionWeights(double semantic, double lexical, double nutritional);

  double semantic() const { return sem_; }
  double lexical() const { return lex_; }
  double nutritional() const { return nutr_; }

 private:
  double sem_ = 1.0 / 3.0;
  double lex_ = 1.0 / 3.0;
  double nutr_ = 1.0 / 3.0;
};

// The five raw measures of one recipe pair.
struct SubScores {
  double sem_a = 0.0;
  double sem_b = 0.0;
  double lexical = 0.0;
  double nutr_recipe = 0.0;
  double nutr_ingredient = 0.0;

  double sem_avg() const { return (sem_a + sem_b) / 2.0; }
  double nutr_avg() const { return (nutr_recipe + nutr_ingredient) / 2.0; }
};

// w_sem * sem_avg + w_lex * lexical + w_nutr * nutr_avg. Throws InputError
// when a sub-score is outside [0, 1].
double fuse(const SubScores& s, const FusionWeights& w);

struct SimilarityRecord {
  std::string main_id;
  std::string secondary_id;
  double sem_a = 0.0;
  double sem_b = 0.0;
  double lexical = 0.0;
  double nutr_recipe = 0.0;
  double nutr_ingredient = 0.0;
  double sem_avg = 0.0;
  double nutr_avg = 0.0;
  double fused = 0.0;

  SubScores sub_scores() const { return {sem_a, sem_b, lexical, nutr_recipe, nutr_ingredient}; }
  bool operator==(const SimilarityRecord&) const = default;
};

SimilarityRecord make_record(std::string main_id, std::string secondary_id, const SubScores& s,
                             const FusionWeights& w);

// Two embedding slots; "model_a" is the one failure rules call roberta.
struct EmbeddingSlots {
  const EmbeddingProvider& model_a;
  const EmbeddingProvider& model_b;
};

// Throws MissingEmbedding when either recipe lacks an embedding.
SimilarityRecord score_pair(const Recipe& main, const Recipe& secondary,
                            const EmbeddingSlots& providers, const FusionWeights& weights);

enum class PairConvention { unordered, ordered };
enum class MissingPolicy { skip, abort };

struct ScoreTable {
  PairConvention convention = PairConvention::unordered;
  // Sorted by (main_id, secondary_id). Unordered tables keep main < secondary.
  std::vector<SimilarityRecord> rows;
};

struct SkippedPair {
  std::string main_id;
  std::string secondary_id;
  std::string reason;
};

struct ScoreOptions {
  PairConvention convention = PairConvention::unordered;
  MissingPolicy on_missing = MissingPolicy::skip;
  std::size_t workers = 1;
};

struct ScoreResult {
  ScoreTable table;
  std::vector<SkippedPair> skipped;
};

// Scores every distinct pair. Output is identical for any worker count.
// Throws InputError for corpora with fewer than 2 recipes, and
// MissingEmbedding under MissingPolicy::abort.
ScoreResult score_all(const Corpus& corpus, const EmbeddingSlots& providers,
                      const FusionWeights& weights, const ScoreOptions& options = {});

// Mirrors an unordered table into n(n-1) ordered rows.
ScoreTable to_ordered(const ScoreTable& table);

// Recomputes view averages and fused scores; raw measures are untouched.
ScoreTable reweight(const ScoreTable& table, const FusionWeights& weights);

struct CandidateSelection {
  static CandidateSelection fraction(double f);
  static CandidateSelection top_k(std::size_t k);

  std::optional<double> fraction_value;
  std::optional<std::size_t> k_value;
};

struct Candidate {
  std::string secondary_id;
  double fused = 0.0;
};

// Secondary recipes of main_id by fused score descending, ties by id.
// Fraction selection keeps ceil(fraction * candidates) rows. Throws
// InputError when main_id does not appear in the table.
std::vector<Candidate> top_candidates(const ScoreTable& table, const std::string& main_id,
                                      const CandidateSelection& selection);

// Delimited score table: header
// main_id,secondary_id,sem_a,sem_b,lexical,nutr_recipe,nutr_ingredient,sem_avg,nutr_avg,fused
// and one row per pair, floats with 6 decimals.
void write_score_table(std::ostream& out, const ScoreTable& table);
void save_score_table(const std::string& path, const ScoreTable& table);
// The convention is inferred: any row with main_id > secondary_id marks
// the table as ordered.
ScoreTable read_score_table(std::istream& in);
ScoreTable load_score_table(const std::string& path);

// "%.6f" formatting shared by every report writer.
std::string format_fixed6(double v);

}  // namespace recipesim
