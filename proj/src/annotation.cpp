#include "recipesim/annotation.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "recipesim/error.hpp"
#include "recipesim/rng.hpp"

namespace recipesim {

using nlohmann::json;

bool TaskSet::contains(const PairKey& pair) const {
  return std::any_of(pairs.begin(), pairs.end(), [&](const TaskPair& p) { return p.pair == pair; });
}

TaskSet create_task_set(const ScoreTable& table, std::size_t n_mains,
                        const CandidateSelection& selection, std::uint64_t seed) {
  std::set<std::string> ids;
  for (const auto& r : table.rows) {
    ids.insert(r.main_id);
    ids.insert(r.secondary_id);
  }
  if (n_mains > ids.size()) {
    throw InputError("cannot sample " + std::to_string(n_mains) + " main recipes from " +
                     std::to_string(ids.size()));
  }
  std::vector<std::string> pool(ids.begin(), ids.end());
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(pool));
  pool.resize(n_mains);

  TaskSet tasks;
  tasks.mains = pool;
  std::set<PairKey> seen;
  for (const auto& main : tasks.mains) {
    for (const auto& c : top_candidates(table, main, selection)) {
      PairKey key = PairKey::canonical(main, c.secondary_id);
      if (seen.insert(key).second) tasks.pairs.push_back({std::move(key), c.fused});
    }
  }
  return tasks;
}

void write_task_set(std::ostream& out, const TaskSet& tasks) {
  json pairs = json::array();
  for (const auto& p : tasks.pairs) {
    pairs.push_back({{"main_id", p.pair.first}, {"secondary_id", p.pair.second}, {"fused", p.fused}});
  }
  out << json{{"mains", tasks.mains}, {"pairs", std::move(pairs)}}.dump(2) << '\n';
}

TaskSet read_task_set(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed task set: ") + e.what());
  }
  TaskSet tasks;
  try {
    tasks.mains = doc.at("mains").get<std::vector<std::string>>();
    std::set<PairKey> seen;
    for (const auto& p : doc.at("pairs")) {
      PairKey key = PairKey::canonical(p.at("main_id").get<std::string>(),
                                       p.at("secondary_id").get<std::string>());
      if (!seen.insert(key).second) throw InputError("task set lists a pair twice");
      tasks.pairs.push_back({std::move(key), p.value("fused", 0.0)});
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed task set: ") + e.what());
  }
  return tasks;
}

TaskSet load_task_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open task set '" + path + "'");
  return read_task_set(in);
}

// --- JudgmentStore ---------------------------------------------------------

namespace {

json to_json(const Judgment& j) {
  return {{"expert", j.expert_id},
          {"main_id", j.pair.first},
          {"secondary_id", j.pair.second},
          {"verdict", std::string(verdict_name(j.verdict))},
          {"ts", j.timestamp_ms}};
}

Judgment from_json(const json& obj) {
  Judgment j;
  j.expert_id = obj.at("expert").get<std::string>();
  j.pair = PairKey::canonical(obj.at("main_id").get<std::string>(),
                              obj.at("secondary_id").get<std::string>());
  const auto verdict = parse_verdict(obj.at("verdict").get<std::string>());
  if (!verdict) throw InputError("judgment log has an unknown verdict");
  j.verdict = *verdict;
  j.timestamp_ms = obj.value("ts", std::int64_t{0});
  return j;
}

}  // namespace

JudgmentStore::JudgmentStore(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;

  // Byte length of the log up to the end of its last complete line.
  std::uintmax_t keep = 0;
  bool torn = false;
  std::ifstream in(path_, std::ios::binary);
  if (in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(std::move(line));
    for (std::size_t k = 0; k < lines.size(); ++k) {
      if (!lines[k].empty()) {
        try {
          apply(from_json(json::parse(lines[k])));
          ++log_lines_;
        } catch (const std::exception& e) {
          if (k + 1 == lines.size()) {  // torn tail from an interrupted append
            torn = true;
            break;
          }
          throw InputError("judgment log '" + path_ + "' line " + std::to_string(k + 1) + ": " +
                           e.what());
        }
      }
      keep += lines[k].size() + 1;
    }
  }
  in.close();

  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw InputError("cannot open judgment log '" + path_ + "': " + std::strerror(errno));
  }
  if (torn && ::ftruncate(fd_, static_cast<off_t>(keep)) != 0) {
    throw std::runtime_error(std::string("judgment log truncate failed: ") + std::strerror(errno));
  }
  // A complete final record without its newline still needs one.
  const off_t size = ::lseek(fd_, 0, SEEK_END);
  if (size > 0) {
    std::ifstream tail(path_, std::ios::binary);
    tail.seekg(size - 1);
    if (tail.get() != '\n') {
      if (::write(fd_, "\n", 1) != 1) throw std::runtime_error("judgment log write failed");
    }
  }
}

JudgmentStore::~JudgmentStore() {
  if (fd_ >= 0) ::close(fd_);
}

JudgmentStore::Outcome JudgmentStore::apply(const Judgment& j) {
  auto key = std::make_pair(j.expert_id, j.pair);
  const auto it = index_.find(key);
  if (it == index_.end()) {
    index_.emplace(std::move(key), current_.size());
    current_.push_back(j);
    return {true, false};
  }
  Judgment& existing = current_[it->second];
  if (existing.verdict == j.verdict) return {false, false};
  audit_.push_back({j.expert_id, j.pair, existing.verdict, j.verdict, j.timestamp_ms});
  existing.verdict = j.verdict;
  existing.timestamp_ms = j.timestamp_ms;
  return {true, true};
}

void JudgmentStore::append(const Judgment& j) {
  if (fd_ < 0) return;
  const std::string line = to_json(j).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("judgment log write failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    throw std::runtime_error(std::string("judgment log fsync failed: ") + std::strerror(errno));
  }
}

JudgmentStore::Outcome JudgmentStore::record(const Judgment& j) {
  const auto it = index_.find({j.expert_id, j.pair});
  if (it != index_.end() && current_[it->second].verdict == j.verdict) return {false, false};
  append(j);  // durable before the in-memory state changes
  ++log_lines_;
  return apply(j);
}

// --- agreement ---------------------------------------------------------------

AgreementStats agreement_stats(std::span<const Judgment> judgments) {
  std::map<PairKey, std::map<std::string, Verdict>> by_pair;
  std::set<std::string> experts;
  for (const auto& j : judgments) {
    by_pair[j.pair][j.expert_id] = j.verdict;
    experts.insert(j.expert_id);
  }
  if (experts.size() < 2) {
    throw AnnotationError(409, "insufficient_experts",
                          "agreement needs judgments from at least 2 experts");
  }
  AgreementStats stats;
  stats.experts.assign(experts.begin(), experts.end());
  for (const auto& [pair, verdicts] : by_pair) {
    if (verdicts.size() != experts.size()) continue;
    ++stats.total_pairs_judged_by_all;
    const Verdict first = verdicts.begin()->second;
    if (std::all_of(verdicts.begin(), verdicts.end(),
                    [&](const auto& kv) { return kv.second == first; })) {
      ++stats.agreed_count;
    }
  }
  if (stats.total_pairs_judged_by_all > 0) {
    stats.agreement_pct = 100.0 * static_cast<double>(stats.agreed_count) /
                          static_cast<double>(stats.total_pairs_judged_by_all);
  }
  return stats;
}

// --- AnnotationService -------------------------------------------------------

AnnotationService::AnnotationService(Corpus corpus, TaskSet tasks, ServiceOptions options)
    : corpus_(std::move(corpus)), tasks_(std::move(tasks)), options_(std::move(options)),
      store_(options_.store_path) {
  if (!options_.clock) {
    options_.clock = [] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  }
  for (const auto& p : tasks_.pairs) {
    if (!corpus_.contains(p.pair.first) || !corpus_.contains(p.pair.second)) {
      throw InputError("task pair (" + p.pair.first + ", " + p.pair.second +
                       ") references a recipe missing from the corpus");
    }
    fused_.emplace(p.pair, p.fused);
  }
  if (options_.roster) registered_ = *options_.roster;
  publish();
}

AnnotationService::~AnnotationService() = default;

std::shared_ptr<const AnnotationService::Snapshot> AnnotationService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void AnnotationService::publish() {
  auto snap = std::make_shared<Snapshot>();
  snap->judgments = store_.judgments();
  for (const auto& j : snap->judgments) snap->judged_by[j.expert_id].insert(j.pair);
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(snap);
}

void AnnotationService::check_expert(const std::string& expert_id) {
  if (expert_id.empty()) throw AnnotationError(400, "missing_expert", "expert id is required");
  std::lock_guard lock(write_mutex_);
  if (registered_.contains(expert_id)) return;
  if (options_.roster) {
    throw AnnotationError(403, "unknown_expert", "expert '" + expert_id + "' is not on the roster");
  }
  registered_.insert(expert_id);
}

NextTask AnnotationService::next_task(const std::string& expert_id) {
  check_expert(expert_id);
  const auto snap = snapshot();
  static const std::set<PairKey> kNone;
  const auto it = snap->judged_by.find(expert_id);
  const std::set<PairKey>& judged = it == snap->judged_by.end() ? kNone : it->second;

  NextTask next;
  next.total = tasks_.pairs.size();
  for (const auto& p : tasks_.pairs) next.judged += judged.contains(p.pair) ? 1 : 0;
  for (std::size_t k = 0; k < tasks_.pairs.size(); ++k) {
    const PairKey& pair = tasks_.pairs[k].pair;
    if (judged.contains(pair)) continue;
    PairPresentation view;
    view.position = k + 1;
    view.total = next.total;
    view.judged = next.judged;
    view.main = &corpus_.at(pair.first);
    view.secondary = &corpus_.at(pair.second);
    if (options_.reveal_scores) view.fused = tasks_.pairs[k].fused;
    next.pair = view;
    return next;
  }
  next.done = true;
  return next;
}

SubmitAck AnnotationService::submit_judgment(const std::string& expert_id,
                                             const std::string& main_id,
                                             const std::string& secondary_id,
                                             const std::string& verdict) {
  check_expert(expert_id);
  const auto parsed = parse_verdict(verdict);
  if (!parsed) {
    throw AnnotationError(400, "malformed_verdict",
                          "verdict must be 'similar' or 'not_similar', got '" + verdict + "'");
  }
  PairKey pair = PairKey::canonical(main_id, secondary_id);
  if (!fused_.contains(pair)) {
    throw AnnotationError(404, "pair_not_in_task_set",
                          "pair (" + pair.first + ", " + pair.second + ") is not in the task set");
  }

  SubmitAck ack;
  {
    std::lock_guard lock(write_mutex_);
    const auto outcome = store_.record({expert_id, pair, *parsed, options_.clock()});
    ack.changed = outcome.changed;
    if (outcome.changed) publish();
    for (const auto& j : store_.judgments()) ack.judged += j.expert_id == expert_id ? 1 : 0;
  }
  return ack;
}

AgreementStats AnnotationService::agreement() const {
  return agreement_stats(snapshot()->judgments);
}

void AnnotationService::export_ground_truth(std::ostream& out) const {
  const auto pairs = agreed_pairs(snapshot()->judgments);
  write_agreed_pairs(out, pairs);
}

const Recipe& AnnotationService::recipe(const std::string& id) const {
  if (!corpus_.contains(id)) {
    throw AnnotationError(404, "unknown_recipe", "no recipe with id '" + id + "'");
  }
  return corpus_.at(id);
}

std::vector<AuditEntry> AnnotationService::audit_log() const {
  std::lock_guard lock(write_mutex_);
  return store_.audit_log();
}

}  // namespace recipesim
