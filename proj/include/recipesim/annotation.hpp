#pragma once

// Expert annotation backend: task sets of candidate pairs, a durable
// append-only judgment log, inter-annotator agreement and ground-truth
// export. HTTP routing lives in annotation_http.hpp.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "recipesim/corpus.hpp"
#include "recipesim/fusion.hpp"
#include "recipesim/judgment.hpp"

namespace recipesim {

struct TaskPair {
  PairKey pair;
  double fused = 0.0;
};

struct TaskSet {
  std::vector<std::string> mains;  // in sampled order
  std::vector<TaskPair> pairs;     // canonical, deduplicated, task order

  bool contains(const PairKey& pair) const;
};

// Samples n_mains recipes uniformly with the seed, takes each one's
// top candidates and merges the canonicalized pairs, first occurrence
// first. Throws InputError when n_mains exceeds the recipes in the table.
TaskSet create_task_set(const ScoreTable& table, std::size_t n_mains,
                        const CandidateSelection& selection, std::uint64_t seed);

void write_task_set(std::ostream& out, const TaskSet& tasks);
TaskSet read_task_set(std::istream& in);
TaskSet load_task_set(const std::string& path);

// Service-level failure with a machine-readable code and HTTP status.
class AnnotationError : public std::runtime_error {
 public:
  AnnotationError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

struct AuditEntry {
  std::string expert_id;
  PairKey pair;
  Verdict previous = Verdict::not_similar;
  Verdict current = Verdict::not_similar;
  std::int64_t timestamp_ms = 0;
};

// Append-only judgment log, one JSON object per line:
//   {"expert":..,"main_id":..,"secondary_id":..,"verdict":..,"ts":..}
// A line is written and fsync'ed before submit returns. Opening replays
// the log; a truncated final line (interrupted write) is cut from the file.
class JudgmentStore {
 public:
  // Empty path keeps the store in memory only.
  explicit JudgmentStore(std::string path = {});
  ~JudgmentStore();
  JudgmentStore(const JudgmentStore&) = delete;
  JudgmentStore& operator=(const JudgmentStore&) = delete;

  struct Outcome {
    bool changed = false;  // false for an identical resubmission
    bool flipped = false;  // an earlier verdict was overwritten
  };

  // Not thread-safe; AnnotationService serializes writers.
  Outcome record(const Judgment& j);

  // Current verdict per (expert, pair), in first-submission order.
  const std::vector<Judgment>& judgments() const { return current_; }
  const std::vector<AuditEntry>& audit_log() const { return audit_; }
  std::size_t log_lines() const { return log_lines_; }

 private:
  Outcome apply(const Judgment& j);
  void append(const Judgment& j);

  std::string path_;
  int fd_ = -1;
  std::vector<Judgment> current_;
  std::map<std::pair<std::string, PairKey>, std::size_t> index_;
  std::vector<AuditEntry> audit_;
  std::size_t log_lines_ = 0;
};

struct AgreementStats {
  std::vector<std::string> experts;
  std::size_t total_pairs_judged_by_all = 0;
  std::size_t agreed_count = 0;
  double agreement_pct = 0.0;
};

// Agreement over pairs judged by every listed expert.
AgreementStats agreement_stats(std::span<const Judgment> judgments);

struct ServiceOptions {
  std::string store_path;            // empty: in-memory
  std::optional<std::set<std::string>> roster;  // closed roster when set
  bool reveal_scores = false;
  std::function<std::int64_t()> clock;  // defaults to system time in ms
};

struct PairPresentation {
  std::size_t position = 0;  // 1-based index into the task set
  std::size_t total = 0;
  std::size_t judged = 0;
  const Recipe* main = nullptr;
  const Recipe* secondary = nullptr;
  std::optional<double> fused;  // only when scores are revealed
};

struct NextTask {
  bool done = false;
  std::size_t judged = 0;
  std::size_t total = 0;
  std::optional<PairPresentation> pair;
};

struct SubmitAck {
  std::size_t judged = 0;
  bool changed = false;
};

// Thread-safe facade over the corpus, task set and store. Writes are
// serialized; reads use an immutable snapshot swapped in after each write.
class AnnotationService {
 public:
  AnnotationService(Corpus corpus, TaskSet tasks, ServiceOptions options = {});
  ~AnnotationService();

  NextTask next_task(const std::string& expert_id);
  SubmitAck submit_judgment(const std::string& expert_id, const std::string& main_id,
                            const std::string& secondary_id, const std::string& verdict);
  AgreementStats agreement() const;
  void export_ground_truth(std::ostream& out) const;
  const Recipe& recipe(const std::string& id) const;

  const Corpus& corpus() const { return corpus_; }
  const TaskSet& tasks() const { return tasks_; }
  std::vector<AuditEntry> audit_log() const;
  bool reveal_scores() const { return options_.reveal_scores; }

 private:
  struct Snapshot {
    std::vector<Judgment> judgments;
    std::map<std::string, std::set<PairKey>> judged_by;
  };

  void check_expert(const std::string& expert_id);
  std::shared_ptr<const Snapshot> snapshot() const;
  void publish();

  Corpus corpus_;
  TaskSet tasks_;
  ServiceOptions options_;
  std::map<PairKey, double> fused_;

  mutable std::mutex write_mutex_;
  JudgmentStore store_;
  std::set<std::string> registered_;

  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

}  // namespace recipesim
