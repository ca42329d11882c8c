#include "recipesim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "recipesim/error.hpp"

namespace recipesim {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t canonical_rank(const std::string& name) {
  const auto* it = std::find(std::begin(kCanonicalNutrients), std::end(kCanonicalNutrients), name);
  return static_cast<std::size_t>(it - std::begin(kCanonicalNutrients));
}

// A record line that fails validation but does not poison the corpus.
struct Reject {
  std::string reason;
};

struct Schema {
  std::vector<std::string> canonical;
  // canonical[k] = declared[source_index[k]]
  std::vector<std::size_t> source_index;
};

Schema parse_header(const std::string& line) {
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw InputError(std::string("line 1: malformed header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("nutrient_schema") ||
      !header["nutrient_schema"].is_array()) {
    throw InputError("line 1: missing header with \"nutrient_schema\" array");
  }
  std::vector<std::string> declared;
  for (const auto& name : header["nutrient_schema"]) {
    if (!name.is_string()) throw InputError("line 1: nutrient names must be strings");
    std::string normalized = lower(trim(name.get<std::string>()));
    if (normalized.empty()) throw InputError("line 1: empty nutrient name");
    if (std::find(declared.begin(), declared.end(), normalized) != declared.end()) {
      throw InputError("line 1: duplicate nutrient name '" + normalized + "'");
    }
    declared.push_back(std::move(normalized));
  }
  if (declared.empty()) throw InputError("line 1: empty nutrient schema");

  Schema schema;
  schema.source_index.resize(declared.size());
  std::iota(schema.source_index.begin(), schema.source_index.end(), 0);
  std::stable_sort(schema.source_index.begin(), schema.source_index.end(),
                   [&](std::size_t a, std::size_t b) {
                     return canonical_rank(declared[a]) < canonical_rank(declared[b]);
                   });
  for (std::size_t k : schema.source_index) schema.canonical.push_back(declared[k]);
  return schema;
}

const json& require(const json& obj, const char* field) {
  if (!obj.contains(field)) throw Reject{std::string("missing field '") + field + "'"};
  return obj[field];
}

std::string require_string(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_string()) throw Reject{std::string("field '") + field + "' must be a string"};
  return v.get<std::string>();
}

NutrientVector read_nutrients(const json& arr, const Schema& schema, const char* what,
                              std::size_t line_number) {
  if (!arr.is_array()) throw Reject{std::string(what) + " must be an array"};
  if (arr.size() != schema.canonical.size()) {
    throw InputError("line " + std::to_string(line_number) +
                     ": inconsistent nutrient dimension in " + what + " (expected " +
                     std::to_string(schema.canonical.size()) + ", got " +
                     std::to_string(arr.size()) + ")");
  }
  NutrientVector declared;
  declared.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw Reject{std::string("non-numeric nutrient in ") + what};
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw Reject{std::string("non-finite nutrient in ") + what};
    if (x < 0.0) throw Reject{std::string("negative nutrient in ") + what};
    declared.push_back(x);
  }
  NutrientVector canonical(declared.size());
  for (std::size_t k = 0; k < declared.size(); ++k) {
    canonical[k] = declared[schema.source_index[k]];
  }
  return canonical;
}

Recipe parse_record(const std::string& line, const Schema& schema, std::size_t line_number) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception&) {
    throw Reject{"invalid JSON"};
  }
  if (!obj.is_object()) throw Reject{"record is not a JSON object"};

  Recipe recipe;
  recipe.id = std::string(trim(require_string(obj, "id")));
  if (recipe.id.empty()) throw Reject{"empty id"};
  recipe.title = require_string(obj, "title");

  const json& ingredients = require(obj, "ingredients");
  if (!ingredients.is_array() || ingredients.empty()) throw Reject{"no ingredients"};
  for (const auto& item : ingredients) {
    if (!item.is_object()) throw Reject{"ingredient is not an object"};
    Ingredient ing;
    try {
      ing.descriptor_path = ingredient_path(require_string(item, "descriptor"));
    } catch (const InputError& e) {
      throw Reject{e.what()};
    }
    ing.nutrients =
        read_nutrients(require(item, "nutrients"), schema, "ingredient nutrients", line_number);
    if (item.contains("quantity") && !item["quantity"].is_null()) {
      const json& q = item["quantity"];
      if (!q.is_object() || !q.contains("amount") || !q["amount"].is_number()) {
        throw Reject{"quantity needs a numeric 'amount'"};
      }
      Quantity quantity;
      quantity.amount = q["amount"].get<double>();
      if (!(quantity.amount >= 0.0) || !std::isfinite(quantity.amount)) {
        throw Reject{"negative quantity"};
      }
      if (q.contains("unit")) {
        if (!q["unit"].is_string()) throw Reject{"quantity unit must be a string"};
        quantity.unit = q["unit"].get<std::string>();
      }
      ing.quantity = std::move(quantity);
    }
    recipe.ingredients.push_back(std::move(ing));
  }

  const json& steps = require(obj, "instructions");
  if (!steps.is_array() || steps.empty()) throw Reject{"no instructions"};
  for (const auto& step : steps) {
    if (!step.is_string()) throw Reject{"instruction steps must be strings"};
    recipe.instructions.push_back(step.get<std::string>());
  }

  recipe.nutrition_per_100g =
      read_nutrients(require(obj, "nutrition_per_100g"), schema, "nutrition_per_100g", line_number);
  return recipe;
}

}  // namespace

std::string Recipe::instruction_text() const {
  std::string text;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (i > 0) text += ". ";
    text += instructions[i];
  }
  return text;
}

Corpus::Corpus(std::vector<std::string> nutrient_schema) : schema_(std::move(nutrient_schema)) {}

void Corpus::add(Recipe recipe) {
  const auto check_dim = [&](const NutrientVector& v) {
    if (v.size() != schema_.size()) {
      throw InputError("recipe '" + recipe.id + "': inconsistent nutrient dimension");
    }
  };
  check_dim(recipe.nutrition_per_100g);
  for (const auto& ing : recipe.ingredients) check_dim(ing.nutrients);
  if (recipes_.contains(recipe.id)) {
    throw InputError("duplicate recipe id '" + recipe.id + "'");
  }
  std::string id = recipe.id;
  recipes_.emplace(std::move(id), std::move(recipe));
}

const Recipe& Corpus::at(const std::string& id) const {
  const auto it = recipes_.find(id);
  if (it == recipes_.end()) throw InputError("unknown recipe id '" + id + "'");
  return it->second;
}

DescriptorPath ingredient_path(std::string_view descriptor) {
  DescriptorPath path;
  std::size_t start = 0;
  while (start <= descriptor.size()) {
    std::size_t comma = descriptor.find(',', start);
    if (comma == std::string_view::npos) comma = descriptor.size();
    const std::string_view part = trim(descriptor.substr(start, comma - start));
    if (!part.empty()) path.push_back(lower(part));
    start = comma + 1;
  }
  if (path.empty()) throw InputError("empty descriptor");
  return path;
}

std::string descriptor_text(const DescriptorPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += ", ";
    out += path[i];
  }
  return out;
}

const NutrientVector& recipe_nutrient_vector(const Recipe& recipe) {
  return recipe.nutrition_per_100g;
}

Corpus parse_corpus(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  std::optional<Schema> schema;
  Corpus corpus;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!schema) {
      schema = parse_header(line);
      corpus = Corpus(schema->canonical);
      continue;
    }
    try {
      corpus.add(parse_record(line, *schema, line_number));
    } catch (const Reject& r) {
      corpus.add_rejection({line_number, r.reason});
    } catch (const InputError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw InputError("line " + std::to_string(line_number) + ": " + msg);
    }
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file '" + path + "'");
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  out << json{{"nutrient_schema", corpus.nutrient_schema()}}.dump() << '\n';
  for (const auto& [id, recipe] : corpus.recipes()) {
    json ingredients = json::array();
    for (const auto& ing : recipe.ingredients) {
      json item = {{"descriptor", descriptor_text(ing.descriptor_path)},
                   {"nutrients", ing.nutrients}};
      if (ing.quantity) {
        item["quantity"] = {{"amount", ing.quantity->amount}, {"unit", ing.quantity->unit}};
      }
      ingredients.push_back(std::move(item));
    }
    json record = {{"id", recipe.id},
                   {"title", recipe.title},
                   {"ingredients", std::move(ingredients)},
                   {"instructions", recipe.instructions},
                   {"nutrition_per_100g", recipe.nutrition_per_100g}};
    out << record.dump() << '\n';
  }
}

}  // namespace recipesim
