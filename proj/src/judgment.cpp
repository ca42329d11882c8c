#include "recipesim/judgment.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "recipesim/error.hpp"

namespace recipesim {

PairKey PairKey::canonical(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::string_view verdict_name(Verdict v) {
  return v == Verdict::similar ? "similar" : "not_similar";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  if (text == "similar") return Verdict::similar;
  if (text == "not_similar") return Verdict::not_similar;
  return std::nullopt;
}

std::vector<AgreedPair> agreed_pairs(std::span<const Judgment> judgments) {
  std::map<PairKey, std::map<std::string, Verdict>> latest;
  for (const auto& j : judgments) latest[j.pair][j.expert_id] = j.verdict;

  std::vector<AgreedPair> out;
  for (const auto& [pair, verdicts] : latest) {
    if (verdicts.size() < 2) continue;
    const Verdict first = verdicts.begin()->second;
    const bool unanimous = std::all_of(verdicts.begin(), verdicts.end(),
                                       [&](const auto& kv) { return kv.second == first; });
    if (unanimous) out.push_back({pair, static_cast<int>(first)});
  }
  return out;
}

void write_agreed_pairs(std::ostream& out, std::span<const AgreedPair> pairs) {
  out << "main_id,secondary_id,label\n";
  for (const auto& p : pairs) out << p.pair.first << ',' << p.pair.second << ',' << p.label << '\n';
}

std::vector<AgreedPair> read_agreed_pairs(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty labeled-pair file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "main_id,secondary_id,label") {
    throw InputError("unexpected labeled-pair header: '" + line + "'");
  }
  std::vector<AgreedPair> out;
  std::set<PairKey> seen;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw InputError("labeled-pair line " + std::to_string(line_number) + ": expected 3 fields");
    }
    const std::string label = line.substr(c2 + 1);
    if (label != "0" && label != "1") {
      throw InputError("labeled-pair line " + std::to_string(line_number) + ": label must be 0 or 1");
    }
    AgreedPair p{PairKey::canonical(line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1)),
                 label == "1" ? 1 : 0};
    if (p.pair.first.empty() || p.pair.second.empty()) {
      throw InputError("labeled-pair line " + std::to_string(line_number) + ": empty id");
    }
    if (!seen.insert(p.pair).second) {
      throw InputError("labeled-pair line " + std::to_string(line_number) + ": duplicate pair");
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const AgreedPair& a, const AgreedPair& b) { return a.pair < b.pair; });
  return out;
}

std::vector<AgreedPair> load_agreed_pairs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open labeled-pair file '" + path + "'");
  return read_agreed_pairs(in);
}

}  // namespace recipesim
