#pragma once

// Generators and brute-force oracles shared by the unit and acceptance suites.
// The oracles are deliberately naive and share no code with the library.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "recipesim/corpus.hpp"
#include "recipesim/annotation.hpp"
#include "recipesim/dataset.hpp"
#include "recipesim/fusion.hpp"
#include "recipesim/judgment.hpp"
#include "recipesim/rng.hpp"

namespace testsupport {

using recipesim::Recipe;
using recipesim::Rng;

// ---- fixtures ------------------------------------------------------------

recipesim::Ingredient ingredient(const std::string& descriptor, std::vector<double> nutrients);
Recipe recipe(const std::string& id, std::vector<recipesim::Ingredient> ingredients,
              std::vector<double> per_100g, std::vector<std::string> steps = {"mix"});

std::string data_dir();
std::string mini_corpus_path();
std::string golden_dir();
std::string cli_path();

// Fresh empty directory under the system temp dir, removed by the caller.
std::filesystem::path scratch_dir(const std::string& name);
std::string read_file(const std::filesystem::path& path);

// ---- generators ----------------------------------------------------------

// Descriptor drawn from a small vocabulary so paths share prefixes often.
std::string random_descriptor(Rng& rng);
// Random recipe with 1..max_ingredients ingredients, nutrient dimension dim.
// Nutrient vectors are sometimes all zero and sometimes duplicated.
Recipe random_recipe(Rng& rng, const std::string& id, std::size_t dim = 5,
                     std::size_t max_ingredients = 8);
std::vector<double> random_matrix_entries(Rng& rng, std::size_t n, std::size_t m);

// 300-row style synthetic set where the lexical feature decides the label.
std::vector<recipesim::LabeledPair> lexical_separable(std::size_t n, std::uint64_t seed);

// Judgments for two experts: n_pairs co-judged, n_disagree of them split.
std::vector<recipesim::Judgment> two_expert_plan(std::size_t n_pairs, std::size_t n_disagree,
                                                 std::uint64_t seed);

// Unordered table of n rows in which each default failure rule matches
// exactly the planted number of rows; the rest sit in regions no rule
// covers, some of them exactly on a rule threshold.
struct PlantedCounts {
  std::size_t nutritional = 0, semantic = 0, lexical = 0;
};
recipesim::ScoreTable planted_failure_table(std::size_t n, const PlantedCounts& counts,
                                            std::uint64_t seed);

// Corpus, task set and score table covering every pair in `judgments`,
// with seeded scores.
struct JudgedWorld {
  recipesim::Corpus corpus;
  recipesim::TaskSet tasks;
  recipesim::ScoreTable table;
};
JudgedWorld world_for(const std::vector<recipesim::Judgment>& judgments, std::uint64_t seed);

// ---- oracles -------------------------------------------------------------

// Maximum of sum_i m[i][perm[i]] over all permutations (square only).
double brute_force_assignment(const std::vector<std::vector<double>>& m);

double oracle_ingredient_similarity(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b);
// Pads to square with zeros, exhaustive permutation maximum, divided by size.
double oracle_lexical(const Recipe& a, const Recipe& b);
double oracle_cosine01(const std::vector<double>& u, const std::vector<double>& v);
double oracle_ingredient_nutrition(const Recipe& a, const Recipe& b);

struct OracleStats {
  double mean, median, std_dev, skew, min, max;
};
OracleStats oracle_stats(const std::vector<double>& x);
double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace testsupport
