#pragma once

// Instruction-text embeddings and their similarity.
//
// Embedding files come in two equivalent encodings:
//
//   text     first line "<model_tag> <dimension> <count>", then one line per
//            recipe: "<id> <v1> ... <vdim>" separated by spaces.
//   binary   magic "RSEMBED1", then little-endian u32 tag length, tag
//            bytes, u32 dimension, u32 count; each record is u32 id length,
//            id bytes, dimension x f32.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recipesim/corpus.hpp"
#include "recipesim/error.hpp"

namespace recipesim {

struct Embedding {
  std::vector<double> values;
  std::string model_tag;
};

// Raised when a provider has no embedding for a recipe.
class MissingEmbedding : public InputError {
 public:
  explicit MissingEmbedding(const std::string& id)
      : InputError("missing embedding for recipe '" + id + "'"), id_(id) {}
  const std::string& recipe_id() const { return id_; }

 private:
  std::string id_;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual const std::string& model_tag() const = 0;
  virtual std::size_t dimension() const = 0;

  // Same recipe, same embedding for the lifetime of the provider.
  // Throws MissingEmbedding when the recipe cannot be resolved.
  virtual Embedding embed(const Recipe& recipe) const = 0;

  // Batch warm-up hook for providers with expensive lookups.
  virtual void prefetch(std::span<const Recipe* const> /*recipes*/) const {}
};

// Precomputed embeddings keyed by recipe id.
class FileEmbeddingProvider : public EmbeddingProvider {
 public:
  FileEmbeddingProvider(std::string model_tag, std::size_t dimension);

  // Throws InputError on duplicate id, wrong dimension, non-finite values
  // or a zero vector.
  void insert(const std::string& id, std::vector<double> values);

  const std::string& model_tag() const override { return tag_; }
  std::size_t dimension() const override { return dim_; }
  Embedding embed(const Recipe& recipe) const override { return lookup(recipe.id); }

  Embedding lookup(const std::string& id) const;
  std::size_t size() const { return vectors_.size(); }
  const std::map<std::string, std::vector<double>>& vectors() const { return vectors_; }

 private:
  std::string tag_;
  std::size_t dim_;
  std::map<std::string, std::vector<double>> vectors_;
};

// Auto-detects the text or binary encoding.
FileEmbeddingProvider read_embeddings(std::istream& in);
FileEmbeddingProvider load_embeddings(const std::string& path);

void write_embeddings_text(std::ostream& out, const FileEmbeddingProvider& provider);
// Values are narrowed to 32-bit floats.
void write_embeddings_binary(std::ostream& out, const FileEmbeddingProvider& provider);

// Deterministic stand-in for a sentence encoder: lowercase alphanumeric
// tokens are feature-hashed (signed) into `dimension` buckets and the
// result is L2-normalized. `seed` selects an independent hash family.
// Throws InputError on empty text or text without tokens.
Embedding fallback_embed(std::string_view text, std::size_t dimension, std::uint64_t seed = 0);

class FallbackEmbeddingProvider : public EmbeddingProvider {
 public:
  FallbackEmbeddingProvider(std::size_t dimension, std::uint64_t seed = 0);

  const std::string& model_tag() const override { return tag_; }
  std::size_t dimension() const override { return dim_; }
  Embedding embed(const Recipe& recipe) const override;

 private:
  std::string tag_ = "fallback";
  std::size_t dim_;
  std::uint64_t seed_;
};

// Clamped cosine of two embeddings from the same provider. Throws
// InputError when tags or dimensions differ.
double semantic_similarity(const Embedding& a, const Embedding& b);

}  // namespace recipesim
