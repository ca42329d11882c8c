#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "recipesim/annotation.hpp"
#include "recipesim/dataset.hpp"
#include "recipesim/error.hpp"
#include "recipesim/evaluation.hpp"
#include "support.hpp"

using namespace recipesim;
namespace fs = std::filesystem;

namespace {

ScoreTable full_table(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ScoreTable t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      char a[16], b[16];
      std::snprintf(a, sizeof a, "r%02zu", i);
      std::snprintf(b, sizeof b, "r%02zu", j);
      t.rows.push_back(make_record(a, b, {rng.uniform(), rng.uniform(), rng.uniform(),
                                          rng.uniform(), rng.uniform()},
                                   FusionWeights{}));
    }
  }
  return t;
}

Judgment judge(const std::string& expert, const std::string& a, const std::string& b, Verdict v,
               std::int64_t ts = 0) {
  return {expert, PairKey::canonical(a, b), v, ts};
}

// Service over a small world of `n` co-judgeable pairs.
struct Fixture {
  explicit Fixture(std::size_t n, ServiceOptions options = {}) {
    std::vector<Judgment> seeds;
    for (std::size_t i = 0; i < n; ++i) {
      seeds.push_back(judge("x", "m" + std::to_string(i), "s" + std::to_string(i), Verdict::similar));
    }
    world = testsupport::world_for(seeds, 81);
    service = std::make_unique<AnnotationService>(world.corpus, world.tasks, std::move(options));
  }
  testsupport::JudgedWorld world;
  std::unique_ptr<AnnotationService> service;
};

template <typename F>
void expect_annotation_error(F&& f, int status, const std::string& code) {
  try {
    f();
    ADD_FAILURE() << "expected " << code;
  } catch (const AnnotationError& e) {
    EXPECT_EQ(e.status(), status);
    EXPECT_EQ(e.code(), code);
  }
}

}  // namespace

TEST(TaskSet, SamplesMainsAndMergesCandidates) {
  const ScoreTable t = full_table(20, 82);
  const TaskSet tasks = create_task_set(t, 5, CandidateSelection::fraction(0.2), 42);
  ASSERT_EQ(tasks.mains.size(), 5u);
  EXPECT_EQ(std::set<std::string>(tasks.mains.begin(), tasks.mains.end()).size(), 5u);
  std::set<PairKey> seen;
  for (const auto& p : tasks.pairs) {
    EXPECT_LT(p.pair.first, p.pair.second);
    EXPECT_TRUE(seen.insert(p.pair).second);
  }
  // ceil(0.2 * 19) = 4 candidates per main, minus pairs shared by two mains.
  EXPECT_LE(tasks.pairs.size(), 20u);
  EXPECT_GE(tasks.pairs.size(), 10u);
  const auto first = top_candidates(t, tasks.mains[0], CandidateSelection::fraction(0.2));
  EXPECT_EQ(tasks.pairs[0].pair, PairKey::canonical(tasks.mains[0], first[0].secondary_id));
  EXPECT_EQ(tasks.pairs[0].fused, first[0].fused);

  const TaskSet again = create_task_set(t, 5, CandidateSelection::fraction(0.2), 42);
  EXPECT_EQ(again.mains, tasks.mains);
  EXPECT_NE(create_task_set(t, 5, CandidateSelection::fraction(0.2), 43).mains, tasks.mains);
  EXPECT_THROW(create_task_set(t, 21, CandidateSelection::top_k(2), 1), InputError);
}

TEST(TaskSet, RoundTripAndValidation) {
  const TaskSet tasks = create_task_set(full_table(10, 83), 3, CandidateSelection::top_k(2), 7);
  std::stringstream s;
  write_task_set(s, tasks);
  const TaskSet back = read_task_set(s);
  EXPECT_EQ(back.mains, tasks.mains);
  ASSERT_EQ(back.pairs.size(), tasks.pairs.size());
  for (std::size_t i = 0; i < back.pairs.size(); ++i) {
    EXPECT_EQ(back.pairs[i].pair, tasks.pairs[i].pair);
    EXPECT_EQ(back.pairs[i].fused, tasks.pairs[i].fused);
  }
  std::istringstream dup(
      R"({"mains":[],"pairs":[{"main_id":"a","secondary_id":"b","fused":0.5},)"
      R"({"main_id":"b","secondary_id":"a","fused":0.5}]})");
  EXPECT_THROW(read_task_set(dup), InputError);
  std::istringstream junk("{not json");
  EXPECT_THROW(read_task_set(junk), InputError);
}

TEST(JudgmentStore, ResubmissionAndFlipAudit) {
  JudgmentStore store;
  EXPECT_TRUE(store.record(judge("x", "a", "b", Verdict::similar, 1)).changed);
  const auto same = store.record(judge("x", "a", "b", Verdict::similar, 2));
  EXPECT_FALSE(same.changed);
  EXPECT_EQ(store.log_lines(), 1u);
  const auto flip = store.record(judge("x", "b", "a", Verdict::not_similar, 3));
  EXPECT_TRUE(flip.changed);
  EXPECT_TRUE(flip.flipped);
  ASSERT_EQ(store.audit_log().size(), 1u);
  EXPECT_EQ(store.audit_log()[0].previous, Verdict::similar);
  EXPECT_EQ(store.audit_log()[0].current, Verdict::not_similar);
  EXPECT_EQ(store.audit_log()[0].timestamp_ms, 3);
  ASSERT_EQ(store.judgments().size(), 1u);
  EXPECT_EQ(store.judgments()[0].verdict, Verdict::not_similar);
}

TEST(JudgmentStore, SurvivesRestartAndTornTail) {
  const fs::path dir = testsupport::scratch_dir("store");
  const std::string path = (dir / "judgments.jsonl").string();
  {
    JudgmentStore store(path);
    store.record(judge("x", "a", "b", Verdict::similar, 1));
    store.record(judge("y", "a", "b", Verdict::not_similar, 2));
    store.record(judge("x", "a", "b", Verdict::not_similar, 3));
  }
  {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    out << R"({"expert":"z","main_id":"a","sec)";
  }
  {
    JudgmentStore store(path);
    EXPECT_EQ(store.log_lines(), 3u);
    ASSERT_EQ(store.judgments().size(), 2u);
    EXPECT_EQ(store.judgments()[0].verdict, Verdict::not_similar);
    EXPECT_EQ(store.audit_log().size(), 1u);
    store.record(judge("z", "a", "c", Verdict::similar, 4));
  }
  {
    JudgmentStore store(path);
    EXPECT_EQ(store.judgments().size(), 3u);
  }
  fs::remove_all(dir);
}

TEST(JudgmentStore, CorruptMiddleLineIsAnError) {
  const fs::path dir = testsupport::scratch_dir("corrupt");
  const std::string path = (dir / "j.jsonl").string();
  {
    std::ofstream out(path);
    out << "garbage\n"
        << R"({"expert":"x","main_id":"a","secondary_id":"b","verdict":"similar","ts":1})" << '\n';
  }
  EXPECT_THROW(JudgmentStore{path}, InputError);
  fs::remove_all(dir);
}

TEST(Agreement, PlannedDisagreements) {
  const auto plan = testsupport::two_expert_plan(318, 63, 84);
  const AgreementStats stats = agreement_stats(plan);
  EXPECT_EQ(stats.experts, (std::vector<std::string>{"alice", "bob"}));
  EXPECT_EQ(stats.total_pairs_judged_by_all, 318u);
  EXPECT_EQ(stats.agreed_count, 255u);
  EXPECT_NEAR(stats.agreement_pct, 80.0, 0.5);
  EXPECT_DOUBLE_EQ(stats.agreement_pct, 100.0 * 255 / 318);
}

TEST(Agreement, NeedsTwoExpertsAndCountsOnlySharedPairs) {
  const std::vector<Judgment> solo{judge("x", "a", "b", Verdict::similar)};
  expect_annotation_error([&] { agreement_stats(solo); }, 409, "insufficient_experts");

  const std::vector<Judgment> js{
      judge("x", "a", "b", Verdict::similar), judge("y", "a", "b", Verdict::similar),
      judge("z", "a", "b", Verdict::similar), judge("x", "a", "c", Verdict::similar),
      judge("y", "a", "c", Verdict::similar),
  };
  const AgreementStats s = agreement_stats(js);
  EXPECT_EQ(s.total_pairs_judged_by_all, 1u);
  EXPECT_EQ(s.agreed_count, 1u);
}

TEST(AgreedPairs, LatestVerdictCounts) {
  const std::vector<Judgment> js{
      judge("x", "a", "b", Verdict::similar, 1), judge("y", "a", "b", Verdict::not_similar, 2),
      judge("y", "a", "b", Verdict::similar, 3), judge("x", "a", "c", Verdict::similar, 4),
  };
  EXPECT_EQ(agreed_pairs(js), (std::vector<AgreedPair>{{{"a", "b"}, 1}}));
}

TEST(AnnotationService, WalksTasksInOrder) {
  Fixture f(3);
  const auto& pairs = f.world.tasks.pairs;
  for (std::size_t k = 0; k < 3; ++k) {
    const NextTask next = f.service->next_task("ann");
    ASSERT_FALSE(next.done);
    EXPECT_EQ(next.judged, k);
    EXPECT_EQ(next.total, 3u);
    EXPECT_EQ(next.pair->position, k + 1);
    EXPECT_EQ(next.pair->main->id, pairs[k].pair.first);
    EXPECT_FALSE(next.pair->fused.has_value());
    const SubmitAck ack = f.service->submit_judgment("ann", pairs[k].pair.second,
                                                     pairs[k].pair.first, "similar");
    EXPECT_TRUE(ack.changed);
    EXPECT_EQ(ack.judged, k + 1);
  }
  EXPECT_TRUE(f.service->next_task("ann").done);
  EXPECT_FALSE(f.service->next_task("other").done);
}

TEST(AnnotationService, IdempotentSubmissionAndFlip) {
  Fixture f(2);
  const PairKey p = f.world.tasks.pairs[0].pair;
  EXPECT_TRUE(f.service->submit_judgment("e", p.first, p.second, "similar").changed);
  const SubmitAck again = f.service->submit_judgment("e", p.first, p.second, "similar");
  EXPECT_FALSE(again.changed);
  EXPECT_EQ(again.judged, 1u);
  f.service->submit_judgment("e", p.first, p.second, "not_similar");
  ASSERT_EQ(f.service->audit_log().size(), 1u);
  EXPECT_EQ(f.service->audit_log()[0].expert_id, "e");
}

TEST(AnnotationService, ErrorCodes) {
  ServiceOptions options;
  options.roster = std::set<std::string>{"alice"};
  Fixture f(2, options);
  const PairKey p = f.world.tasks.pairs[0].pair;
  expect_annotation_error([&] { f.service->next_task("mallory"); }, 403, "unknown_expert");
  expect_annotation_error([&] { f.service->next_task(""); }, 400, "missing_expert");
  expect_annotation_error([&] { f.service->submit_judgment("alice", p.first, p.second, "maybe"); },
                          400, "malformed_verdict");
  expect_annotation_error([&] { f.service->submit_judgment("alice", "m0", "m1", "similar"); }, 404,
                          "pair_not_in_task_set");
  expect_annotation_error([&] { f.service->recipe("nope"); }, 404, "unknown_recipe");
  EXPECT_EQ(f.service->recipe(p.first).id, p.first);
}

TEST(AnnotationService, RevealsScoresOnRequest) {
  ServiceOptions options;
  options.reveal_scores = true;
  Fixture f(1, options);
  const NextTask next = f.service->next_task("e");
  ASSERT_TRUE(next.pair->fused.has_value());
  EXPECT_EQ(*next.pair->fused, f.world.tasks.pairs[0].fused);
}

TEST(AnnotationService, TaskPairsMustExistInCorpus) {
  Fixture f(1);
  TaskSet bad = f.world.tasks;
  bad.pairs.push_back({{"ghost", "zz"}, 0.5});
  EXPECT_THROW(AnnotationService(f.world.corpus, bad), InputError);
}

TEST(AnnotationService, RestartResumesProgress) {
  const fs::path dir = testsupport::scratch_dir("resume");
  ServiceOptions options;
  options.store_path = (dir / "j.jsonl").string();
  {
    Fixture f(3, options);
    const PairKey p = f.world.tasks.pairs[0].pair;
    f.service->submit_judgment("e", p.first, p.second, "similar");
  }
  {
    Fixture f(3, options);
    const NextTask next = f.service->next_task("e");
    EXPECT_EQ(next.judged, 1u);
    EXPECT_EQ(next.pair->position, 2u);
  }
  fs::remove_all(dir);
}

TEST(AnnotationService, ConcurrentWritersAllLand) {
  const fs::path dir = testsupport::scratch_dir("concurrent");
  ServiceOptions options;
  options.store_path = (dir / "j.jsonl").string();
  Fixture f(40, options);
  std::vector<std::thread> threads;
  for (int e = 0; e < 8; ++e) {
    threads.emplace_back([&, e] {
      const std::string expert = "e" + std::to_string(e);
      for (const auto& p : f.world.tasks.pairs) {
        f.service->submit_judgment(expert, p.pair.first, p.pair.second,
                                   e % 2 ? "similar" : "not_similar");
        f.service->next_task(expert);
      }
    });
  }
  for (auto& t : threads) t.join();
  const std::string log = testsupport::read_file(dir / "j.jsonl");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 8 * 40);
  const AgreementStats stats = f.service->agreement();
  EXPECT_EQ(stats.total_pairs_judged_by_all, 40u);
  EXPECT_EQ(stats.agreed_count, 0u);
  JudgmentStore reread(options.store_path);
  EXPECT_EQ(reread.judgments().size(), 320u);
  fs::remove_all(dir);
}

TEST(AnnotationService, ExportFeedsTraining) {
  const auto plan = testsupport::two_expert_plan(318, 63, 85);
  const auto world = testsupport::world_for(plan, 86);
  AnnotationService service(world.corpus, world.tasks);
  for (const auto& j : plan) {
    service.submit_judgment(j.expert_id, j.pair.first, j.pair.second,
                            std::string(verdict_name(j.verdict)));
  }
  EXPECT_EQ(service.agreement().agreed_count, 255u);

  std::stringstream csv;
  service.export_ground_truth(csv);
  const auto agreed = read_agreed_pairs(csv);
  EXPECT_EQ(agreed, agreed_pairs(plan));
  ASSERT_EQ(agreed.size(), 255u);

  const GroundTruth gt = join_features(agreed, world.table);
  EXPECT_EQ(gt.pairs.size(), 255u);
  EXPECT_TRUE(gt.missing_scores.empty());
  EXPECT_NO_THROW(cross_validate(ModelKind::logistic, gt.pairs, 5, 42));
}

TEST(LabeledPairs, RoundTripAndErrors) {
  const std::vector<AgreedPair> pairs{{{"a", "b"}, 0}, {{"a", "c"}, 1}};
  std::stringstream s;
  write_agreed_pairs(s, pairs);
  EXPECT_EQ(s.str(), "main_id,secondary_id,label\na,b,0\na,c,1\n");
  EXPECT_EQ(read_agreed_pairs(s), pairs);
  std::istringstream dup("main_id,secondary_id,label\na,b,0\nb,a,1\n");
  EXPECT_THROW(read_agreed_pairs(dup), InputError);
  std::istringstream bad("main_id,secondary_id,label\na,b,2\n");
  EXPECT_THROW(read_agreed_pairs(bad), InputError);
}
