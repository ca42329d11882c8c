#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>
#include <sstream>

#include <unistd.h>

namespace testsupport {

recipesim::Ingredient ingredient(const std::string& descriptor, std::vector<double> nutrients) {
  recipesim::Ingredient ing;
  ing.descriptor_path = recipesim::ingredient_path(descriptor);
  ing.nutrients = std::move(nutrients);
  return ing;
}

Recipe recipe(const std::string& id, std::vector<recipesim::Ingredient> ingredients,
              std::vector<double> per_100g, std::vector<std::string> steps) {
  Recipe r;
  r.id = id;
  r.title = id;
  r.ingredients = std::move(ingredients);
  r.instructions = std::move(steps);
  r.nutrition_per_100g = std::move(per_100g);
  return r;
}

std::string data_dir() { return RECIPESIM_DATA_DIR; }
std::string mini_corpus_path() { return data_dir() + "/mini_corpus.jsonl"; }
std::string golden_dir() { return RECIPESIM_GOLDEN_DIR; }
std::string cli_path() { return RECIPESIM_CLI; }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("recipesim_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string random_descriptor(Rng& rng) {
  static const char* heads[] = {"spices", "oil", "sugars", "beans", "cheese"};
  static const char* mids[] = {"pepper", "olive", "granulated", "kidney", "cheddar", "paprika"};
  static const char* tails[] = {"black", "red or cayenne", "raw", "canned", "dried"};
  std::string d = heads[rng.below(std::size(heads))];
  const auto depth = rng.below(3);
  if (depth >= 1) d += std::string(", ") + mids[rng.below(std::size(mids))];
  if (depth >= 2) d += std::string(", ") + tails[rng.below(std::size(tails))];
  return d;
}

namespace {

std::vector<double> random_nutrients(Rng& rng, std::size_t dim) {
  static const double levels[] = {0.0, 0.5, 1.0, 2.5, 10.0, 47.3};
  std::vector<double> v(dim);
  if (rng.below(10) == 0) return v;  // all zero
  for (auto& x : v) x = levels[rng.below(std::size(levels))];
  return v;
}

}  // namespace

Recipe random_recipe(Rng& rng, const std::string& id, std::size_t dim,
                     std::size_t max_ingredients) {
  std::vector<recipesim::Ingredient> ings;
  const std::size_t n = 1 + rng.below(max_ingredients);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng.below(5) == 0) {
      ings.push_back(ings[rng.below(i)]);  // repeated ingredient
    } else {
      ings.push_back(ingredient(random_descriptor(rng), random_nutrients(rng, dim)));
    }
  }
  return recipe(id, std::move(ings), random_nutrients(rng, dim));
}

std::vector<double> random_matrix_entries(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<double> e(n * m);
  for (auto& x : e) {
    // Coarse values make exact ties common, which is where solvers break.
    x = rng.below(3) == 0 ? static_cast<double>(rng.below(5)) / 4.0 : rng.uniform();
  }
  return e;
}

std::vector<recipesim::LabeledPair> lexical_separable(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<recipesim::LabeledPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    recipesim::LabeledPair p;
    p.pair = {"m" + std::to_string(i), "s" + std::to_string(i)};
    p.label = rng.below(5) < 2 ? 1 : 0;
    const double sem = rng.uniform();
    const double nutr = rng.uniform();
    const double lex = p.label ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.4);
    p.features = {sem, nutr, lex};
    out.push_back(p);
  }
  return out;
}

std::vector<recipesim::Judgment> two_expert_plan(std::size_t n_pairs, std::size_t n_disagree,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> order(n_pairs);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));
  std::vector<bool> disagree(n_pairs, false);
  for (std::size_t i = 0; i < n_disagree; ++i) disagree[order[i]] = true;

  std::vector<recipesim::Judgment> out;
  std::int64_t t = 1;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    char a[32], b[32];
    std::snprintf(a, sizeof a, "m%04zu", i);
    std::snprintf(b, sizeof b, "s%04zu", i);
    const recipesim::PairKey key{a, b};
    const auto v = rng.below(2) ? recipesim::Verdict::similar : recipesim::Verdict::not_similar;
    const auto other = disagree[i] ? (v == recipesim::Verdict::similar
                                          ? recipesim::Verdict::not_similar
                                          : recipesim::Verdict::similar)
                                   : v;
    out.push_back({"alice", key, v, t++});
    out.push_back({"bob", key, other, t++});
  }
  return out;
}

recipesim::ScoreTable planted_failure_table(std::size_t n, const PlantedCounts& counts,
                                            std::uint64_t seed) {
  Rng rng(seed);
  recipesim::ScoreTable table;
  const std::size_t planted = counts.nutritional + counts.semantic + counts.lexical;
  std::vector<int> kind(n, 0);
  for (std::size_t i = 0; i < planted && i < n; ++i) {
    kind[i] = i < counts.nutritional ? 1 : i < counts.nutritional + counts.semantic ? 2 : 3;
  }
  rng.shuffle(std::span(kind));
  for (std::size_t i = 0; i < n; ++i) {
    recipesim::SubScores s;
    s.sem_b = rng.uniform();
    s.nutr_ingredient = rng.uniform();
    switch (kind[i]) {
      case 1:  // nutr > 0.95, roberta < 0.6, jaccard < 0.1
        s.nutr_recipe = rng.uniform(0.96, 1.0);
        s.sem_a = rng.uniform(0.0, 0.59);
        s.lexical = rng.uniform(0.0, 0.09);
        break;
      case 2:  // roberta > 0.85, jaccard < 0.1, nutr < 0.2
        s.sem_a = rng.uniform(0.86, 1.0);
        s.lexical = rng.uniform(0.0, 0.09);
        s.nutr_recipe = rng.uniform(0.0, 0.19);
        break;
      case 3:  // jaccard > 0.3, roberta < 0.6
        s.lexical = rng.uniform(0.31, 1.0);
        s.sem_a = rng.uniform(0.0, 0.59);
        s.nutr_recipe = rng.uniform();
        break;
      default:
        s.sem_a = rng.uniform(0.6, 0.85);
        s.lexical = rng.uniform(0.1, 0.3);
        s.nutr_recipe = rng.uniform();
        if (i % 10 == 0) {
          // Exactly on a threshold: strict comparisons must not fire.
          s.nutr_recipe = 0.95;
          s.sem_a = 0.3;
          s.lexical = 0.05;
        } else if (i % 10 == 1) {
          s.lexical = 0.3;
          s.sem_a = 0.2;
        }
    }
    char a[32], b[32];
    std::snprintf(a, sizeof a, "a%05zu", i);
    std::snprintf(b, sizeof b, "b%05zu", i);
    table.rows.push_back(recipesim::make_record(a, b, s, recipesim::FusionWeights{}));
  }
  return table;
}

JudgedWorld world_for(const std::vector<recipesim::Judgment>& judgments, std::uint64_t seed) {
  Rng rng(seed);
  JudgedWorld w{recipesim::Corpus({"fat"}), {}, {}};
  std::set<recipesim::PairKey> seen;
  for (const auto& j : judgments) {
    for (const auto& id : {j.pair.first, j.pair.second}) {
      if (!w.corpus.contains(id)) {
        w.corpus.add(recipe(id, {ingredient("water, tap", {rng.uniform(0.1, 5.0)})}, {1.0},
                            {"Pour " + id}));
      }
    }
    if (!seen.insert(j.pair).second) continue;
    const recipesim::SubScores s{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(),
                                 rng.uniform()};
    w.table.rows.push_back(
        recipesim::make_record(j.pair.first, j.pair.second, s, recipesim::FusionWeights{}));
    w.tasks.pairs.push_back({j.pair, w.table.rows.back().fused});
  }
  std::sort(w.table.rows.begin(), w.table.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.main_id, a.secondary_id) < std::tie(b.main_id, b.secondary_id);
  });
  return w;
}

double brute_force_assignment(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += m[i][perm[i]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n == 0 ? 0.0 : best;
}

double oracle_ingredient_similarity(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
  std::size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
  return static_cast<double>(common) / static_cast<double>(std::max(a.size(), b.size()));
}

namespace {

double padded_brute_force(std::vector<std::vector<double>> m, std::size_t rows, std::size_t cols) {
  const std::size_t n = std::max(rows, cols);
  m.resize(n);
  for (auto& row : m) row.resize(n, 0.0);
  return brute_force_assignment(m) / static_cast<double>(n);
}

}  // namespace

double oracle_lexical(const Recipe& a, const Recipe& b) {
  std::vector<std::vector<double>> m(a.ingredients.size());
  for (std::size_t i = 0; i < a.ingredients.size(); ++i) {
    for (const auto& ib : b.ingredients) {
      m[i].push_back(
          oracle_ingredient_similarity(a.ingredients[i].descriptor_path, ib.descriptor_path));
    }
  }
  return padded_brute_force(m, a.ingredients.size(), b.ingredients.size());
}

double oracle_cosine01(const std::vector<double>& u, const std::vector<double>& v) {
  long double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<long double>(u[i]) * v[i];
    nu += static_cast<long double>(u[i]) * u[i];
    nv += static_cast<long double>(v[i]) * v[i];
  }
  if (nu == 0 || nv == 0) return 0.0;
  const long double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return static_cast<double>(std::clamp(c, 0.0L, 1.0L));
}

double oracle_ingredient_nutrition(const Recipe& a, const Recipe& b) {
  std::vector<std::vector<double>> all;
  for (const auto& i : a.ingredients) all.push_back(i.nutrients);
  for (const auto& i : b.ingredients) all.push_back(i.nutrients);
  const std::size_t dim = all.front().size();
  for (std::size_t d = 0; d < dim; ++d) {
    long double mean = 0;
    for (const auto& v : all) mean += v[d];
    mean /= all.size();
    long double var = 0;
    for (const auto& v : all) var += (v[d] - mean) * (v[d] - mean);
    const long double sd = std::sqrt(var / all.size());
    for (auto& v : all) {
      v[d] = sd > 1e-12L * std::max(1.0L, std::fabs(mean)) ? static_cast<double>((v[d] - mean) / sd)
                                                            : 0.0;
    }
  }
  const std::size_t na = a.ingredients.size();
  std::vector<std::vector<double>> m(na);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < b.ingredients.size(); ++j) {
      m[i].push_back(oracle_cosine01(all[i], all[na + j]));
    }
  }
  return padded_brute_force(m, na, b.ingredients.size());
}

OracleStats oracle_stats(const std::vector<double>& x) {
  const long double n = x.size();
  long double sum = 0;
  for (double v : x) sum += v;
  const long double mean = sum / n;
  long double m2 = 0, m3 = 0;
  for (double v : x) {
    m2 += (v - mean) * (v - mean);
    m3 += (v - mean) * (v - mean) * (v - mean);
  }
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double median = k % 2 ? sorted[k / 2] : (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0;
  const long double var_pop = m2 / n;
  long double skew = 0;
  if (var_pop > 0) {
    const long double g1 = (m3 / n) / std::pow(var_pop, 1.5L);
    skew = g1 * std::sqrt(n * (n - 1)) / (n - 2);
  }
  return {static_cast<double>(mean),
          median,
          static_cast<double>(std::sqrt(m2 / (n - 1))),
          static_cast<double>(skew),
          sorted.front(),
          sorted.back()};
}

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const long double n = x.size();
  long double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const long double mx = sx / n, my = sy / n;
  long double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    cxx += (x[i] - mx) * (x[i] - mx);
    cyy += (y[i] - my) * (y[i] - my);
  }
  if (cxx == 0 || cyy == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(cxy / std::sqrt(cxx * cyy));
}

}  // namespace testsupport
