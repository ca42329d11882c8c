#pragma once

#include <span>
#include <utility>
#include <vector>

#include "recipesim/corpus.hpp"

namespace recipesim {

// Cosine similarity in [-1, 1]. Returns 0 when either vector is all zero.
// Throws InputError on dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

// cosine clamped to [0, 1].
double clamped_cosine(std::span<const double> u, std::span<const double> v);

// Per-recipe view: clamped cosine of the two per-100g vectors.
double recipe_nutrition_similarity(const Recipe& a, const Recipe& b);

// Z-scores every dimension over the union of both ingredient lists using
// the population standard deviation. Zero-variance dimensions become 0.
std::pair<std::vector<NutrientVector>, std::vector<NutrientVector>> standardize_pair(
    std::span<const NutrientVector> a, std::span<const NutrientVector> b);

// Per-ingredient view: standardize_pair, clamped-cosine matrix, null
// padding, optimal assignment, matched total / max(|A|, |B|).
double ingredient_nutrition_similarity(const Recipe& a, const Recipe& b);

struct NutritionScores {
  double per_recipe = 0.0;
  double per_ingredient = 0.0;
};

NutritionScores nutrition_similarity(const Recipe& a, const Recipe& b);

}  // namespace recipesim
