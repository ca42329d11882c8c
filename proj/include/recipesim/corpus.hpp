#pragma once

// Recipe corpus: domain types, line-delimited JSON ingestion and
// serialization.
//
// File layout (UTF-8, one JSON object per line):
//   line 1   {"nutrient_schema": ["fat", "protein", ...]}
//   line 2+  {"id": ..., "title": ..., "ingredients": [...],
//             "instructions": [...], "nutrition_per_100g": [...]}
// Every nutrient array is ordered as the header declares; ingestion
// reorders it into canonical schema order.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace recipesim {

// Canonical nutrient order. Schemas may use any subset, in any order, and
// may add names not listed here; those sort after the known ones.
inline constexpr std::string_view kCanonicalNutrients[] = {
    "fat", "energy", "protein", "saturates", "salt", "sugars"};

using NutrientVector = std::vector<double>;
using DescriptorPath = std::vector<std::string>;

struct Quantity {
  double amount = 0.0;
  std::string unit;

  bool operator==(const Quantity&) const = default;
};

struct Ingredient {
  DescriptorPath descriptor_path;
  NutrientVector nutrients;
  std::optional<Quantity> quantity;

  bool operator==(const Ingredient&) const = default;
};

struct Recipe {
  std::string id;
  std::string title;
  std::vector<Ingredient> ingredients;
  std::vector<std::string> instructions;
  NutrientVector nutrition_per_100g;

  // Instruction steps joined with ". ", the document fed to embedders.
  std::string instruction_text() const;

  bool operator==(const Recipe&) const = default;
};

struct RejectedLine {
  std::size_t line_number = 0;  // 1-based, counting the header
  std::string reason;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<std::string> nutrient_schema);

  // Throws InputError on duplicate id or wrong nutrient dimension.
  void add(Recipe recipe);

  const std::vector<std::string>& nutrient_schema() const { return schema_; }
  const std::map<std::string, Recipe>& recipes() const { return recipes_; }
  std::size_t size() const { return recipes_.size(); }
  bool contains(const std::string& id) const { return recipes_.contains(id); }
  const Recipe& at(const std::string& id) const;

  // Record lines that failed validation during parsing.
  const std::vector<RejectedLine>& rejected() const { return rejected_; }
  void add_rejection(RejectedLine r) { rejected_.push_back(std::move(r)); }

  bool operator==(const Corpus& other) const {
    return schema_ == other.schema_ && recipes_ == other.recipes_;
  }

 private:
  std::vector<std::string> schema_;
  std::map<std::string, Recipe> recipes_;
  std::vector<RejectedLine> rejected_;
};

// Splits a comma-separated descriptor, trims and lowercases each
// component, drops empty components. Throws InputError("empty descriptor")
// when nothing remains.
DescriptorPath ingredient_path(std::string_view descriptor);

// Inverse of ingredient_path for normalized paths: components joined by ", ".
std::string descriptor_text(const DescriptorPath& path);

// Per-100g vector of the recipe, in canonical schema order.
const NutrientVector& recipe_nutrient_vector(const Recipe& recipe);

// Parses the line-delimited corpus format. Malformed record lines are
// collected in Corpus::rejected(); duplicate ids, inconsistent nutrient
// dimensions and a missing or malformed header throw InputError. Blank
// lines are ignored.
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::string& path);

// Writes the corpus in the same format, canonical schema order, recipes
// sorted by id.
void write_corpus(std::ostream& out, const Corpus& corpus);

}  // namespace recipesim
