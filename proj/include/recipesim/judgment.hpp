#pragma once

// Expert judgments and the labeled-pair exchange format shared by the
// annotation service (writer) and the classifier trainer (reader).
//
// Labeled-pair file:
//   main_id,secondary_id,label
//   <id>,<id>,<0|1>
// Pairs are canonical (main_id < secondary_id) and sorted.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recipesim {

// Recipe pair in lexicographic id order.
struct PairKey {
  std::string first;
  std::string second;

  static PairKey canonical(std::string a, std::string b);

  auto operator<=>(const PairKey&) const = default;
  bool operator==(const PairKey&) const = default;
};

enum class Verdict { not_similar = 0, similar = 1 };

std::string_view verdict_name(Verdict v);
// "similar" or "not_similar"; nullopt otherwise.
std::optional<Verdict> parse_verdict(std::string_view text);

struct Judgment {
  std::string expert_id;
  PairKey pair;
  Verdict verdict = Verdict::not_similar;
  std::int64_t timestamp_ms = 0;
};

struct AgreedPair {
  PairKey pair;
  int label = 0;

  bool operator==(const AgreedPair&) const = default;
};

// Pairs judged by at least two experts whose latest verdicts are
// unanimous, sorted by pair. When an expert judged a pair more than once
// the last judgment in sequence order counts.
std::vector<AgreedPair> agreed_pairs(std::span<const Judgment> judgments);

void write_agreed_pairs(std::ostream& out, std::span<const AgreedPair> pairs);
// Throws InputError on malformed lines or duplicate pairs.
std::vector<AgreedPair> read_agreed_pairs(std::istream& in);
std::vector<AgreedPair> load_agreed_pairs(const std::string& path);

}  // namespace recipesim
