#include <gtest/gtest.h>

#include <algorithm>

#include "recipesim/corpus.hpp"
#include "recipesim/error.hpp"
#include "recipesim/nutrition.hpp"
#include "support.hpp"

using namespace recipesim;
using testsupport::ingredient;
using testsupport::recipe;

namespace {

Recipe per100(const std::string& id, std::vector<double> v) {
  return recipe(id, {ingredient("x", std::vector<double>(v.size(), 1.0))}, std::move(v));
}

Recipe with_ingredient_vectors(const std::string& id, const std::vector<std::vector<double>>& vs) {
  std::vector<Ingredient> ings;
  for (std::size_t i = 0; i < vs.size(); ++i) ings.push_back(ingredient("i" + std::to_string(i), vs[i]));
  return recipe(id, std::move(ings), std::vector<double>(vs.front().size(), 1.0));
}

}  // namespace

TEST(Cosine, BasicCases) {
  const std::vector<double> u{1, 2, 3}, x{1, 0}, y{0, 1}, z{0, 0};
  EXPECT_EQ(cosine(u, u), 1.0);
  EXPECT_EQ(cosine(x, y), 0.0);
  EXPECT_EQ(cosine(z, x), 0.0);
  EXPECT_THROW(cosine(u, x), InputError);
  const std::vector<double> neg{-1, 0};
  EXPECT_EQ(cosine(x, neg), -1.0);
  EXPECT_EQ(clamped_cosine(x, neg), 0.0);
}

TEST(RecipeNutrition, PrintedCaseVectors) {
  // Case 2 and Case 5 of the case studies; rounded inputs, published 0.0407 and 0.0442.
  const Recipe dressing = per100("a", {6.03, 0.08, 0.19, 0.83, 0.15});
  const Recipe cocktail = per100("b", {0.12, 0.36, 0.06, 0.01, 7.22});
  const Recipe potatoes = per100("c", {2.97, 2.48, 0.49, 0.42, 0.0});
  EXPECT_NEAR(recipe_nutrition_similarity(dressing, cocktail), 0.0407, 0.01);
  EXPECT_NEAR(recipe_nutrition_similarity(potatoes, cocktail), 0.0442, 0.01);
}

TEST(RecipeNutrition, OtherPrintedCases) {
  EXPECT_NEAR(recipe_nutrition_similarity(per100("a", {0.12, 1.02, 0.09, 0.03, 46.13}),
                                          per100("b", {0.07, 0.23, 0.01, 0.01, 5.39})),
              0.9997, 5e-4);
  EXPECT_NEAR(recipe_nutrition_similarity(per100("a", {6.74, 12.74, 4.06, 1.28, 6.19}),
                                          per100("b", {0.09, 0.13, 0.12, 0.02, 20.66})),
              0.3892, 5e-4);
  EXPECT_NEAR(recipe_nutrition_similarity(per100("a", {0.02, 0.03, 0.01, 0.0, 4.83}),
                                          per100("b", {0.03, 0.05, 0.01, 0.01, 15.45})),
              1.0, 5e-5);
}

TEST(RecipeNutrition, ZeroVectorScoresZero) {
  EXPECT_EQ(recipe_nutrition_similarity(per100("a", {0, 0, 0}), per100("b", {1, 2, 3})), 0.0);
  EXPECT_EQ(recipe_nutrition_similarity(per100("a", {0, 0, 0}), per100("b", {0, 0, 0})), 0.0);
}

TEST(RecipeNutrition, ScaleInvariantAndSymmetric) {
  Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> u(5), v(5);
    for (auto& x : u) x = rng.uniform(0, 50);
    for (auto& x : v) x = rng.uniform(0, 50);
    const double k = rng.uniform(0.01, 100);
    std::vector<double> ku = u;
    for (auto& x : ku) x *= k;
    const double base = recipe_nutrition_similarity(per100("a", u), per100("b", v));
    EXPECT_NEAR(recipe_nutrition_similarity(per100("a", ku), per100("b", v)), base, 1e-12);
    EXPECT_EQ(base, recipe_nutrition_similarity(per100("b", v), per100("a", u)));
    EXPECT_EQ(recipe_nutrition_similarity(per100("a", u), per100("a", u)), 1.0);
  }
}

TEST(StandardizePair, PopulationZScoresOverUnion) {
  const std::vector<NutrientVector> a{{0.0}}, b{{2.0}};
  const auto [za, zb] = standardize_pair(a, b);
  EXPECT_DOUBLE_EQ(za[0][0], -1.0);
  EXPECT_DOUBLE_EQ(zb[0][0], 1.0);
}

TEST(StandardizePair, ZeroVarianceDimensionsMapToZero) {
  const std::vector<NutrientVector> a{{3.0, 1.0}}, b{{3.0, 5.0}};
  const auto [za, zb] = standardize_pair(a, b);
  EXPECT_EQ(za[0][0], 0.0);
  EXPECT_EQ(zb[0][0], 0.0);
  EXPECT_DOUBLE_EQ(za[0][1], -1.0);

  const std::vector<NutrientVector> same{{0.1, 0.7, 3.3}};
  const auto [sa, sb] = standardize_pair(same, same);
  EXPECT_EQ(sa[0], (NutrientVector{0, 0, 0}));
  EXPECT_EQ(sb[0], (NutrientVector{0, 0, 0}));
}

TEST(StandardizePair, IngredientOrderDoesNotChangeValues) {
  const std::vector<NutrientVector> a{{1, 2}, {3, 9}, {0, 4}}, b{{5, 5}, {2, 0}};
  std::vector<NutrientVector> a_rev(a.rbegin(), a.rend());
  const auto [za, zb] = standardize_pair(a, b);
  const auto [ra, rb] = standardize_pair(a_rev, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t d = 0; d < 2; ++d) EXPECT_NEAR(za[i][d], ra[a.size() - 1 - i][d], 1e-15);
  }
  EXPECT_THROW(standardize_pair({}, b), InputError);
}

TEST(IngredientNutrition, TwoVersusFourHandTrace) {
  // One dimension. Union {1,3,0,2,4,6}: mean 8/3, so z signs are A(-,+), B(-,-,+,+).
  // 1-D clamped cosine is 1 for equal signs, so both A rows find a partner:
  // matched total 2, two null rows, score 2/4.
  const Recipe a = with_ingredient_vectors("a", {{1}, {3}});
  const Recipe b = with_ingredient_vectors("b", {{0}, {2}, {4}, {6}});
  EXPECT_DOUBLE_EQ(ingredient_nutrition_similarity(a, b), 0.5);
  EXPECT_DOUBLE_EQ(ingredient_nutrition_similarity(b, a), 0.5);
}

TEST(IngredientNutrition, ThreeByThreeAgainstBruteForce) {
  const Recipe a = with_ingredient_vectors("a", {{1, 0, 2}, {0, 5, 1}, {3, 3, 0}});
  const Recipe b = with_ingredient_vectors("b", {{2, 1, 2}, {0, 4, 0}, {1, 1, 1}});
  EXPECT_NEAR(ingredient_nutrition_similarity(a, b), testsupport::oracle_ingredient_nutrition(a, b),
              1e-12);
}

TEST(IngredientNutrition, SingleSharedProfileIsDegenerateZero) {
  const Recipe a = with_ingredient_vectors("a", {{1, 2, 3}});
  EXPECT_EQ(ingredient_nutrition_similarity(a, a), 0.0);
}

TEST(IngredientNutrition, MatchesBruteForceOracle) {
  Rng rng(32);
  for (int trial = 0; trial < 2000; ++trial) {
    const Recipe a = testsupport::random_recipe(rng, "a", 5, 6);
    const Recipe b = testsupport::random_recipe(rng, "b", 5, 6);
    ASSERT_NEAR(ingredient_nutrition_similarity(a, b), testsupport::oracle_ingredient_nutrition(a, b),
                1e-9)
        << "trial " << trial;
  }
}

TEST(IngredientNutrition, SymmetricAndInRange) {
  Rng rng(33);
  for (int trial = 0; trial < 2000; ++trial) {
    const Recipe a = testsupport::random_recipe(rng, "a", 5, 12);
    const Recipe b = testsupport::random_recipe(rng, "b", 5, 12);
    const NutritionScores ab = nutrition_similarity(a, b);
    const NutritionScores ba = nutrition_similarity(b, a);
    EXPECT_EQ(ab.per_recipe, ba.per_recipe);
    EXPECT_EQ(ab.per_ingredient, ba.per_ingredient);
    for (double s : {ab.per_recipe, ab.per_ingredient}) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
}
