#include "recipesim/nutrition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recipesim/assignment.hpp"
#include "recipesim/error.hpp"

namespace recipesim {

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw InputError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()) + ")");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  // sqrt(uu * vv) rather than sqrt(uu) * sqrt(vv): gives exactly 1 for u == v.
  return std::clamp(dot / std::sqrt(uu * vv), -1.0, 1.0);
}

double clamped_cosine(std::span<const double> u, std::span<const double> v) {
  return std::clamp(cosine(u, v), 0.0, 1.0);
}

double recipe_nutrition_similarity(const Recipe& a, const Recipe& b) {
  return clamped_cosine(recipe_nutrient_vector(a), recipe_nutrient_vector(b));
}

std::pair<std::vector<NutrientVector>, std::vector<NutrientVector>> standardize_pair(
    std::span<const NutrientVector> a, std::span<const NutrientVector> b) {
  if (a.empty() || b.empty()) throw InputError("standardize_pair: empty ingredient list");
  const std::size_t dim = a.front().size();
  const auto check = [dim](const NutrientVector& v) {
    if (v.size() != dim) throw InputError("standardize_pair: dimension mismatch");
  };
  std::for_each(a.begin(), a.end(), check);
  std::for_each(b.begin(), b.end(), check);

  const double count = static_cast<double>(a.size() + b.size());
  std::vector<double> mean(dim, 0.0), stddev(dim, 0.0);
  for (std::size_t d = 0; d < dim; ++d) {
    // Per-side partial sums keep the result independent of argument order.
    double sum_a = 0.0, sum_b = 0.0;
    for (const auto& v : a) sum_a += v[d];
    for (const auto& v : b) sum_b += v[d];
    mean[d] = (sum_a + sum_b) / count;
    double ss_a = 0.0, ss_b = 0.0;
    for (const auto& v : a) ss_a += (v[d] - mean[d]) * (v[d] - mean[d]);
    for (const auto& v : b) ss_b += (v[d] - mean[d]) * (v[d] - mean[d]);
    stddev[d] = std::sqrt((ss_a + ss_b) / count);
  }

  const auto standardize = [&](std::span<const NutrientVector> side) {
    std::vector<NutrientVector> out;
    out.reserve(side.size());
    for (const auto& v : side) {
      NutrientVector z(dim, 0.0);
      for (std::size_t d = 0; d < dim; ++d) {
        // Relative threshold: identical values can leave a rounding-level spread.
        if (stddev[d] > 1e-12 * std::max(1.0, std::abs(mean[d]))) {
          z[d] = (v[d] - mean[d]) / stddev[d];
        }
      }
      out.push_back(std::move(z));
    }
    return out;
  };
  return {standardize(a), standardize(b)};
}

double ingredient_nutrition_similarity(const Recipe& a, const Recipe& b) {
  if (a.ingredients.empty() || b.ingredients.empty()) {
    throw InputError("ingredient_nutrition_similarity needs at least one ingredient per recipe");
  }
  std::vector<NutrientVector> raw_a, raw_b;
  for (const auto& ing : a.ingredients) raw_a.push_back(ing.nutrients);
  for (const auto& ing : b.ingredients) raw_b.push_back(ing.nutrients);
  const auto [za, zb] = standardize_pair(raw_a, raw_b);

  SimilarityMatrix m(za.size(), zb.size());
  for (std::size_t i = 0; i < za.size(); ++i) {
    for (std::size_t j = 0; j < zb.size(); ++j) m.set(i, j, clamped_cosine(za[i], zb[j]));
  }
  return matched_mean(pad_square(m));
}

NutritionScores nutrition_similarity(const Recipe& a, const Recipe& b) {
  return {recipe_nutrition_similarity(a, b), ingredient_nutrition_similarity(a, b)};
}

}  // namespace recipesim
