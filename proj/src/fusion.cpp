#include "recipesim/fusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include "recipesim/error.hpp"
#include "recipesim/lexical.hpp"
#include "recipesim/nutrition.hpp"

namespace recipesim {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InputError(std::string("sub-score ") + name + " = " + std::to_string(v) +
                     " outside [0, 1]");
  }
}

bool by_pair(const SimilarityRecord& a, const SimilarityRecord& b) {
  if (a.main_id != b.main_id) return a.main_id < b.main_id;
  return a.secondary_id < b.secondary_id;
}

constexpr const char* kHeader =
    "main_id,secondary_id,sem_a,sem_b,lexical,nutr_recipe,nutr_ingredient,sem_avg,nutr_avg,fused";

void check_id_for_csv(const std::string& id) {
  if (id.find_first_of(",\r\n") != std::string::npos) {
    throw InputError("recipe id '" + id + "' cannot be written to a delimited table");
  }
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

FusionWeights::FusionWeights(double semantic, double lexical, double nutritional)
    : sem_(semantic), lex_(lexical), nutr_(nutritional) {
  if (!(sem_ >= 0.0 && lex_ >= 0.0 && nutr_ >= 0.0)) {
    throw InputError("fusion weights must be nonnegative");
  }
  if (std::abs(sem_ + lex_ + nutr_ - 1.0) > 1e-9) {
    throw InputError("fusion weights must sum to 1, got " + std::to_string(sem_ + lex_ + nutr_));
  }
}

double fuse(const SubScores& s, const FusionWeights& w) {
  check_unit(s.sem_a, "sem_a");
  check_unit(s.sem_b, "sem_b");
  check_unit(s.lexical, "lexical");
  check_unit(s.nutr_recipe, "nutr_recipe");
  check_unit(s.nutr_ingredient, "nutr_ingredient");
  const double fused =
      w.semantic() * s.sem_avg() + w.lexical() * s.lexical + w.nutritional() * s.nutr_avg();
  return std::clamp(fused, 0.0, 1.0);
}

SimilarityRecord make_record(std::string main_id, std::string secondary_id, const SubScores& s,
                             const FusionWeights& w) {
  SimilarityRecord r;
  r.main_id = std::move(main_id);
  r.secondary_id = std::move(secondary_id);
  r.sem_a = s.sem_a;
  r.sem_b = s.sem_b;
  r.lexical = s.lexical;
  r.nutr_recipe = s.nutr_recipe;
  r.nutr_ingredient = s.nutr_ingredient;
  r.sem_avg = s.sem_avg();
  r.nutr_avg = s.nutr_avg();
  r.fused = fuse(s, w);
  return r;
}

namespace {

SubScores raw_scores(const Recipe& a, const Recipe& b, const Embedding& a1, const Embedding& b1,
                     const Embedding& a2, const Embedding& b2) {
  SubScores s;
  s.sem_a = semantic_similarity(a1, b1);
  s.sem_b = semantic_similarity(a2, b2);
  s.lexical = lexical_similarity(a, b);
  const NutritionScores n = nutrition_similarity(a, b);
  s.nutr_recipe = n.per_recipe;
  s.nutr_ingredient = n.per_ingredient;
  return s;
}

}  // namespace

SimilarityRecord score_pair(const Recipe& main, const Recipe& secondary,
                            const EmbeddingSlots& providers, const FusionWeights& weights) {
  const SubScores s =
      raw_scores(main, secondary, providers.model_a.embed(main), providers.model_a.embed(secondary),
                 providers.model_b.embed(main), providers.model_b.embed(secondary));
  return make_record(main.id, secondary.id, s, weights);
}

ScoreResult score_all(const Corpus& corpus, const EmbeddingSlots& providers,
                      const FusionWeights& weights, const ScoreOptions& options) {
  if (corpus.size() < 2) throw InputError("score_all needs at least 2 recipes");

  std::vector<const Recipe*> recipes;
  for (const auto& [id, recipe] : corpus.recipes()) recipes.push_back(&recipe);
  const std::size_t n = recipes.size();

  providers.model_a.prefetch(recipes);
  providers.model_b.prefetch(recipes);

  // Resolve embeddings up front; the pair loop then only reads.
  struct Resolved {
    std::optional<Embedding> a, b;
    std::string missing;
  };
  std::vector<Resolved> resolved(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      resolved[i].a = providers.model_a.embed(*recipes[i]);
      resolved[i].b = providers.model_b.embed(*recipes[i]);
    } catch (const MissingEmbedding& e) {
      if (options.on_missing == MissingPolicy::abort) throw;
      resolved[i].missing = e.what();
    }
  }

  ScoreResult result;
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::string& reason =
          !resolved[i].missing.empty() ? resolved[i].missing : resolved[j].missing;
      if (!reason.empty()) {
        result.skipped.push_back({recipes[i]->id, recipes[j]->id, reason});
      } else {
        work.emplace_back(i, j);
      }
    }
  }

  std::vector<SimilarityRecord> rows(work.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    constexpr std::size_t chunk = 16;
    for (;;) {
      const std::size_t start = next.fetch_add(chunk);
      if (start >= work.size()) return;
      const std::size_t end = std::min(work.size(), start + chunk);
      try {
        for (std::size_t k = start; k < end; ++k) {
          const auto [i, j] = work[k];
          const SubScores s = raw_scores(*recipes[i], *recipes[j], *resolved[i].a,
                                         *resolved[j].a, *resolved[i].b, *resolved[j].b);
          rows[k] = make_record(recipes[i]->id, recipes[j]->id, s, weights);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(work.size());
        return;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.table.convention = PairConvention::unordered;
  result.table.rows = std::move(rows);
  if (options.convention == PairConvention::ordered) result.table = to_ordered(result.table);
  return result;
}

ScoreTable to_ordered(const ScoreTable& table) {
  if (table.convention == PairConvention::ordered) return table;
  ScoreTable out;
  out.convention = PairConvention::ordered;
  out.rows.reserve(table.rows.size() * 2);
  for (const auto& r : table.rows) {
    out.rows.push_back(r);
    SimilarityRecord mirror = r;
    std::swap(mirror.main_id, mirror.secondary_id);
    out.rows.push_back(std::move(mirror));
  }
  std::sort(out.rows.begin(), out.rows.end(), by_pair);
  return out;
}

ScoreTable reweight(const ScoreTable& table, const FusionWeights& weights) {
  ScoreTable out;
  out.convention = table.convention;
  out.rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    out.rows.push_back(make_record(r.main_id, r.secondary_id, r.sub_scores(), weights));
  }
  return out;
}

CandidateSelection CandidateSelection::fraction(double f) {
  if (!(f > 0.0 && f <= 1.0)) throw InputError("candidate fraction must be in (0, 1]");
  CandidateSelection s;
  s.fraction_value = f;
  return s;
}

CandidateSelection CandidateSelection::top_k(std::size_t k) {
  if (k == 0) throw InputError("candidate k must be positive");
  CandidateSelection s;
  s.k_value = k;
  return s;
}

std::vector<Candidate> top_candidates(const ScoreTable& table, const std::string& main_id,
                                      const CandidateSelection& selection) {
  std::vector<Candidate> all;
  for (const auto& r : table.rows) {
    if (r.main_id == main_id) {
      all.push_back({r.secondary_id, r.fused});
    } else if (table.convention == PairConvention::unordered && r.secondary_id == main_id) {
      all.push_back({r.main_id, r.fused});
    }
  }
  if (all.empty()) throw InputError("recipe '" + main_id + "' does not appear in the score table");

  std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    if (a.fused != b.fused) return a.fused > b.fused;
    return a.secondary_id < b.secondary_id;
  });

  std::size_t keep = all.size();
  if (selection.k_value) {
    keep = std::min(keep, *selection.k_value);
  } else if (selection.fraction_value) {
    // Guard against products like 0.2 * 10 landing a hair above an integer.
    const double want = *selection.fraction_value * static_cast<double>(all.size());
    keep = std::min(keep, static_cast<std::size_t>(std::ceil(want - 1e-9)));
  }
  all.resize(keep);
  return all;
}

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_score_table(std::ostream& out, const ScoreTable& table) {
  out << kHeader << '\n';
  for (const auto& r : table.rows) {
    check_id_for_csv(r.main_id);
    check_id_for_csv(r.secondary_id);
    out << r.main_id << ',' << r.secondary_id;
    for (double v : {r.sem_a, r.sem_b, r.lexical, r.nutr_recipe, r.nutr_ingredient, r.sem_avg,
                     r.nutr_avg, r.fused}) {
      out << ',' << format_fixed6(v);
    }
    out << '\n';
  }
}

void save_score_table(const std::string& path, const ScoreTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write score table '" + path + "'");
  write_score_table(out, table);
  if (!out) throw std::runtime_error("failed writing score table '" + path + "'");
}

ScoreTable read_score_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty score table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw InputError("unexpected score table header: '" + line + "'");

  ScoreTable table;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != 10) {
      throw InputError("score table line " + std::to_string(line_number) + ": expected 10 fields");
    }
    SimilarityRecord r;
    r.main_id = fields[0];
    r.secondary_id = fields[1];
    double* targets[] = {&r.sem_a,   &r.sem_b,    &r.lexical,  &r.nutr_recipe, &r.nutr_ingredient,
                         &r.sem_avg, &r.nutr_avg, &r.fused};
    for (std::size_t k = 0; k < 8; ++k) {
      try {
        std::size_t used = 0;
        *targets[k] = std::stod(fields[k + 2], &used);
        if (used != fields[k + 2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError("score table line " + std::to_string(line_number) + ": bad number '" +
                         fields[k + 2] + "'");
      }
      if (!(*targets[k] >= 0.0 && *targets[k] <= 1.0)) {
        throw InputError("score table line " + std::to_string(line_number) +
                         ": score outside [0, 1]");
      }
    }
    if (r.main_id > r.secondary_id) table.convention = PairConvention::ordered;
    table.rows.push_back(std::move(r));
  }
  return table;
}

ScoreTable load_score_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open score table '" + path + "'");
  return read_score_table(in);
}

}  // namespace recipesim
