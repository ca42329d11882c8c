#include "recipesim/semantic.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "recipesim/nutrition.hpp"

namespace recipesim {

namespace {

constexpr std::array<char, 8> kBinaryMagic = {'R', 'S', 'E', 'M', 'B', 'E', 'D', '1'};

std::uint32_t read_u32(std::istream& in, const char* what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw InputError(std::string("truncated embedding file while reading ") + what);
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff),
                                 static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::string read_bytes(std::istream& in, std::uint32_t n, const char* what) {
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) {
    throw InputError(std::string("truncated embedding file while reading ") + what);
  }
  return s;
}

FileEmbeddingProvider read_binary(std::istream& in) {
  const std::string tag = read_bytes(in, read_u32(in, "tag length"), "tag");
  const std::uint32_t dim = read_u32(in, "dimension");
  const std::uint32_t count = read_u32(in, "count");
  FileEmbeddingProvider provider(tag, dim);
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::string id = read_bytes(in, read_u32(in, "id length"), "id");
    std::vector<double> values(dim);
    for (auto& v : values) {
      v = static_cast<double>(std::bit_cast<float>(read_u32(in, "vector")));
    }
    provider.insert(id, std::move(values));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw InputError("embedding file has trailing bytes after " + std::to_string(count) +
                     " records");
  }
  return provider;
}

double parse_double(std::string_view token, std::size_t line_number) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError("embedding line " + std::to_string(line_number) + ": bad number '" +
                     std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

FileEmbeddingProvider read_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty embedding file");
  const auto header = split_ws(line);
  if (header.size() != 3) {
    throw InputError("embedding header must be '<model_tag> <dimension> <count>'");
  }
  const auto parse_count = [](std::string_view s, const char* what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw InputError(std::string("bad embedding header ") + what);
    }
    return v;
  };
  const std::size_t dim = parse_count(header[1], "dimension");
  const std::size_t count = parse_count(header[2], "count");
  FileEmbeddingProvider provider{std::string(header[0]), dim};

  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw InputError("embedding line " + std::to_string(line_number) + ": expected " +
                       std::to_string(dim) + " values, got " + std::to_string(fields.size() - 1));
    }
    std::vector<double> values;
    values.reserve(dim);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      values.push_back(parse_double(fields[k], line_number));
    }
    provider.insert(std::string(fields[0]), std::move(values));
  }
  if (provider.size() != count) {
    throw InputError("embedding header declares " + std::to_string(count) + " records, found " +
                     std::to_string(provider.size()));
  }
  return provider;
}

std::uint64_t fnv1a(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // final avalanche so low bits depend on every byte
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

}  // namespace

FileEmbeddingProvider::FileEmbeddingProvider(std::string model_tag, std::size_t dimension)
    : tag_(std::move(model_tag)), dim_(dimension) {
  if (tag_.empty()) throw InputError("embedding model tag must not be empty");
  if (dim_ == 0) throw InputError("embedding dimension must be positive");
}

void FileEmbeddingProvider::insert(const std::string& id, std::vector<double> values) {
  if (values.size() != dim_) {
    throw InputError("embedding for '" + id + "' has dimension " + std::to_string(values.size()) +
                     ", expected " + std::to_string(dim_));
  }
  double norm = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("embedding for '" + id + "' has non-finite entries");
    norm += v * v;
  }
  if (norm == 0.0) throw InputError("embedding for '" + id + "' is a zero vector");
  if (!vectors_.emplace(id, std::move(values)).second) {
    throw InputError("duplicate embedding id '" + id + "'");
  }
}

Embedding FileEmbeddingProvider::lookup(const std::string& id) const {
  const auto it = vectors_.find(id);
  if (it == vectors_.end()) throw MissingEmbedding(id);
  return {it->second, tag_};
}

FileEmbeddingProvider read_embeddings(std::istream& in) {
  std::array<char, kBinaryMagic.size()> head{};
  in.read(head.data(), head.size());
  if (in.gcount() == static_cast<std::streamsize>(head.size()) && head == kBinaryMagic) {
    return read_binary(in);
  }
  in.clear();
  in.seekg(0);
  if (!in) throw InputError("embedding stream is not seekable");
  return read_text(in);
}

FileEmbeddingProvider load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open embedding file '" + path + "'");
  return read_embeddings(in);
}

void write_embeddings_text(std::ostream& out, const FileEmbeddingProvider& provider) {
  out << provider.model_tag() << ' ' << provider.dimension() << ' ' << provider.size() << '\n';
  std::array<char, 64> buf{};
  for (const auto& [id, values] : provider.vectors()) {
    out << id;
    for (double v : values) {
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      out << ' ' << std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
    }
    out << '\n';
  }
}

void write_embeddings_binary(std::ostream& out, const FileEmbeddingProvider& provider) {
  out.write(kBinaryMagic.data(), kBinaryMagic.size());
  write_u32(out, static_cast<std::uint32_t>(provider.model_tag().size()));
  out << provider.model_tag();
  write_u32(out, static_cast<std::uint32_t>(provider.dimension()));
  write_u32(out, static_cast<std::uint32_t>(provider.size()));
  for (const auto& [id, values] : provider.vectors()) {
    write_u32(out, static_cast<std::uint32_t>(id.size()));
    out << id;
    for (double v : values) write_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

Embedding fallback_embed(std::string_view text, std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw InputError("fallback_embed: dimension must be positive");
  if (text.empty()) throw InputError("fallback_embed: empty text");

  std::vector<double> values(dimension, 0.0);
  std::string token;
  bool any = false;
  const auto flush = [&] {
    if (token.empty()) return;
    const std::uint64_t h = fnv1a(token, seed);
    values[h % dimension] += (h >> 63) != 0 ? -1.0 : 1.0;
    any = true;
    token.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) != 0) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  if (!any) throw InputError("fallback_embed: text has no tokens");

  double norm = 0.0;
  for (double v : values) norm += v * v;
  if (norm == 0.0) {
    // Every token cancelled out against a colliding opposite-sign token.
    values[fnv1a(text, seed + 1) % dimension] = 1.0;
    norm = 1.0;
  }
  norm = std::sqrt(norm);
  for (auto& v : values) v /= norm;
  return {std::move(values), "fallback"};
}

FallbackEmbeddingProvider::FallbackEmbeddingProvider(std::size_t dimension, std::uint64_t seed)
    : dim_(dimension), seed_(seed) {
  if (dim_ == 0) throw InputError("fallback embedder dimension must be positive");
}

Embedding FallbackEmbeddingProvider::embed(const Recipe& recipe) const {
  return fallback_embed(recipe.instruction_text(), dim_, seed_);
}

double semantic_similarity(const Embedding& a, const Embedding& b) {
  if (a.model_tag != b.model_tag) {
    throw InputError("semantic_similarity: provider mismatch ('" + a.model_tag + "' vs '" +
                     b.model_tag + "')");
  }
  if (a.values.size() != b.values.size()) {
    throw InputError("semantic_similarity: dimension mismatch");
  }
  return clamped_cosine(a.values, b.values);
}

}  // namespace recipesim
