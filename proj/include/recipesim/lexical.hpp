#pragma once

#include "recipesim/corpus.hpp"

namespace recipesim {

// Longest common prefix of the two descriptor paths divided by the longer
// path's length: ["spices","pepper","black"] vs
// ["spices","pepper","red or cayenne"] scores 2/3.
double ingredient_similarity(const DescriptorPath& a, const DescriptorPath& b);

// Ingredient-level hierarchical Jaccard between two recipes. The pairwise
// ingredient_similarity matrix is null-padded to square and matched with
// the Hungarian algorithm; the matched total is divided by the larger
// ingredient count, so unmatched ingredients pull the score down.
double lexical_similarity(const Recipe& a, const Recipe& b);

}  // namespace recipesim
