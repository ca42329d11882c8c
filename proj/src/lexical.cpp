#include "recipesim/lexical.hpp"

#include <algorithm>

#include "recipesim/assignment.hpp"
#include "recipesim/error.hpp"

namespace recipesim {

double ingredient_similarity(const DescriptorPath& a, const DescriptorPath& b) {
  if (a.empty() || b.empty()) throw InputError("empty descriptor path");
  const std::size_t shorter = std::min(a.size(), b.size());
  std::size_t common = 0;
  while (common < shorter && a[common] == b[common]) ++common;
  return static_cast<double>(common) / static_cast<double>(std::max(a.size(), b.size()));
}

double lexical_similarity(const Recipe& a, const Recipe& b) {
  if (a.ingredients.empty() || b.ingredients.empty()) {
    throw InputError("lexical_similarity needs at least one ingredient per recipe");
  }
  SimilarityMatrix m(a.ingredients.size(), b.ingredients.size());
  for (std::size_t i = 0; i < a.ingredients.size(); ++i) {
    for (std::size_t j = 0; j < b.ingredients.size(); ++j) {
      m.set(i, j, ingredient_similarity(a.ingredients[i].descriptor_path,
                                        b.ingredients[j].descriptor_path));
    }
  }
  return matched_mean(pad_square(m));
}

}  // namespace recipesim
