// recipesim: ingest, score, analyze, train and serve.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "recipesim/annotation.hpp"
#include "recipesim/annotation_http.hpp"
#include "recipesim/commands.hpp"
#include "recipesim/error.hpp"

namespace cli = recipesim::cli;

namespace {

void add_source_flags(CLI::App* cmd, cli::EmbeddingSource& source, const std::string& slot,
                      const std::string& env_slot) {
  cmd->add_option("--" + slot + "-embeddings", source.file,
                  "Embedding file (text or binary) for " + slot)
      ->envname("RECIPESIM_" + env_slot + "_EMBEDDINGS");
  cmd->add_option("--" + slot + "-service", source.service_url,
                  "Embedding service URL for " + slot + " (POST {texts} -> {vectors})")
      ->envname("RECIPESIM_" + env_slot + "_SERVICE");
  cmd->add_option("--" + slot + "-service-dim", source.service_dimension,
                  "Vector dimension returned by the " + slot + " service");
  cmd->add_option("--" + slot + "-fallback-dim", source.fallback_dimension,
                  "Dimension of the built-in hashing embedder used when no file or service is given")
      ->capture_default_str();
  cmd->add_option("--" + slot + "-fallback-seed", source.fallback_seed,
                  "Seed of the built-in hashing embedder")
      ->capture_default_str();
}

std::set<std::string> read_roster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw recipesim::InputError("cannot open roster file '" + path + "'");
  std::set<std::string> roster;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) roster.insert(line);
  }
  return roster;
}

struct ServeConfig {
  std::string corpus_path;
  std::string tasks_path;
  std::string store_path;
  std::string roster_path;
  std::string static_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  bool reveal_scores = false;
};

int run_serve(const ServeConfig& config) {
  recipesim::ServiceOptions options;
  options.store_path = config.store_path;
  options.reveal_scores = config.reveal_scores;
  if (!config.roster_path.empty()) options.roster = read_roster(config.roster_path);
  recipesim::AnnotationService service(recipesim::load_corpus(config.corpus_path),
                                       recipesim::load_task_set(config.tasks_path), options);

  // Signals are taken synchronously by a watcher thread so shutdown runs
  // outside signal context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  recipesim::AnnotationServer server(service, config.static_dir);
  const int port = server.bind(config.host, config.port);
  if (port < 0) {
    throw recipesim::InputError("cannot bind " + config.host + ":" + std::to_string(config.port));
  }
  std::cout << "listening on " << config.host << ':' << port << std::endl;

  std::jthread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.serve();
  // serve() also returns on a listener failure; wake the watcher either way.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  std::cout << "stopped; judgments are on disk" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view recipe similarity: lexical, nutritional and semantic scores fused per pair."};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with any of the flags below");

  // ingest
  std::string ingest_corpus;
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus file and report rejected records");
  ingest->add_option("corpus", ingest_corpus, "Corpus JSONL file")
      ->required()
      ->envname("RECIPESIM_CORPUS");

  // score
  cli::ScoreConfig score_config;
  double w_sem = 1.0 / 3, w_lex = 1.0 / 3, w_nutr = 1.0 / 3;
  std::string convention = "unordered";
  std::string on_missing = "skip";
  auto* score = app.add_subcommand("score", "Score every recipe pair and write the score table");
  score->add_option("--corpus", score_config.corpus_path, "Corpus JSONL file")
      ->required()
      ->envname("RECIPESIM_CORPUS");
  add_source_flags(score, score_config.model_a, "model-a", "MODEL_A");
  add_source_flags(score, score_config.model_b, "model-b", "MODEL_B");
  score->add_option("--w-sem", w_sem, "Semantic view weight")->capture_default_str();
  score->add_option("--w-lex", w_lex, "Lexical view weight")->capture_default_str();
  score->add_option("--w-nutr", w_nutr, "Nutritional view weight")->capture_default_str();
  score->add_option("--convention", convention, "Pair convention")
      ->check(CLI::IsMember({"unordered", "ordered"}))
      ->capture_default_str();
  score->add_option("--on-missing", on_missing, "What to do when an embedding is missing")
      ->check(CLI::IsMember({"skip", "abort"}))
      ->capture_default_str();
  score->add_option("--workers", score_config.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->envname("RECIPESIM_WORKERS")
      ->capture_default_str();
  score->add_option("-o,--output", score_config.output_path, "Score table CSV to write")
      ->required()
      ->envname("RECIPESIM_TABLE");
  score->add_option("--skip-report", score_config.skip_report_path,
                    "Skipped-pair CSV (default: <output>.skipped.csv)");

  // analyze
  cli::AnalyzeConfig analyze_config;
  std::string denominator = "ordered";
  auto* analyze = app.add_subcommand("analyze", "Descriptive, correlation, failure, bin and model reports");
  analyze->add_option("--table", analyze_config.table_path, "Score table CSV")
      ->required()
      ->envname("RECIPESIM_TABLE");
  analyze->add_option("--rules", analyze_config.rules_path,
                      "Failure rules, one per line: 'name: metric op value, ...'");
  analyze->add_option("-o,--output-dir", analyze_config.output_dir, "Directory for report CSVs")
      ->required()
      ->envname("RECIPESIM_OUTPUT_DIR");
  analyze->add_option("--reports", analyze_config.reports, "Reports to emit")
      ->check(CLI::IsMember({"descriptive", "correlation", "failures", "bins", "models"}))
      ->delimiter(',')
      ->capture_default_str();
  analyze->add_option("--denominator", denominator, "Failure percentage denominator")
      ->check(CLI::IsMember({"ordered", "unordered"}))
      ->capture_default_str();

  // train
  cli::TrainConfig train_config;
  std::string model = "logistic";
  std::optional<std::size_t> max_depth;
  auto* train = app.add_subcommand("train", "Cross-validate a classifier on expert-labeled pairs");
  train->add_option("--ground-truth", train_config.ground_truth_path,
                    "Labeled pairs CSV (main_id,secondary_id,label)")
      ->required()
      ->envname("RECIPESIM_GROUND_TRUTH");
  train->add_option("--table", train_config.table_path, "Score table CSV")
      ->required()
      ->envname("RECIPESIM_TABLE");
  train->add_option("--model", model, "logistic (lr) or forest (rf)")
      ->check(CLI::IsMember({"logistic", "lr", "forest", "rf"}))
      ->capture_default_str();
  train->add_option("--seed", train_config.seed, "Seed for folds and forests")
      ->envname("RECIPESIM_SEED")
      ->capture_default_str();
  train->add_option("--folds", train_config.folds, "Cross-validation folds")->capture_default_str();
  train->add_option("--l2", train_config.settings.logistic.l2_strength, "Logistic L2 strength")
      ->capture_default_str();
  train->add_option("--max-iter", train_config.settings.logistic.max_iter, "Logistic Newton iterations")
      ->capture_default_str();
  train->add_option("--tolerance", train_config.settings.logistic.tolerance,
                    "Logistic gradient-norm tolerance")
      ->capture_default_str();
  train->add_option("--trees", train_config.settings.forest.trees, "Forest size")->capture_default_str();
  train->add_option("--max-features", train_config.settings.forest.max_features,
                    "Features tried per split")
      ->capture_default_str();
  train->add_option("--min-leaf", train_config.settings.forest.min_leaf, "Minimum rows per leaf")
      ->capture_default_str();
  train->add_option("--max-depth", max_depth, "Maximum tree depth (default unlimited)");
  train->add_option("--workers", train_config.settings.forest.workers, "Threads for forest training")
      ->check(CLI::PositiveNumber)
      ->envname("RECIPESIM_WORKERS")
      ->capture_default_str();
  train->add_option("-o,--output", train_config.output_path, "Report CSV to write")->required();

  // serve
  ServeConfig serve_config;
  auto* serve = app.add_subcommand("serve", "Run the expert annotation HTTP service");
  serve->add_option("--corpus", serve_config.corpus_path, "Corpus JSONL file")
      ->required()
      ->envname("RECIPESIM_CORPUS");
  serve->add_option("--tasks", serve_config.tasks_path, "Task set JSON")
      ->required()
      ->envname("RECIPESIM_TASKS");
  serve->add_option("--store", serve_config.store_path, "Append-only judgment log")
      ->required()
      ->envname("RECIPESIM_STORE");
  serve->add_option("--roster", serve_config.roster_path,
                    "File of allowed expert ids, one per line (closed roster)")
      ->envname("RECIPESIM_ROSTER");
  serve->add_option("--static", serve_config.static_dir, "Directory served at / (frontend build)");
  serve->add_option("--host", serve_config.host, "Bind address")
      ->envname("RECIPESIM_HOST")
      ->capture_default_str();
  serve->add_option("--port", serve_config.port, "Port (0 picks a free one)")
      ->envname("RECIPESIM_PORT")
      ->capture_default_str();
  serve->add_flag("--reveal-scores", serve_config.reveal_scores,
                  "Include fused scores in task responses");

  // tasks
  cli::TasksConfig tasks_config;
  std::optional<double> fraction;
  auto* tasks = app.add_subcommand("tasks", "Build an annotation task set from a score table");
  tasks->add_option("--table", tasks_config.table_path, "Score table CSV")
      ->required()
      ->envname("RECIPESIM_TABLE");
  tasks->add_option("--mains", tasks_config.n_mains, "Main recipes to sample")->capture_default_str();
  auto* fraction_opt =
      tasks->add_option("--fraction", fraction, "Top fraction of candidates per main (default 0.2)");
  tasks->add_option("--top-k", tasks_config.k, "Top k candidates per main")->excludes(fraction_opt);
  tasks->add_option("--seed", tasks_config.seed, "Sampling seed")
      ->envname("RECIPESIM_SEED")
      ->capture_default_str();
  tasks->add_option("-o,--output", tasks_config.output_path, "Task set JSON to write")
      ->required()
      ->envname("RECIPESIM_TASKS");

  // embed
  cli::EmbedConfig embed_config;
  auto* embed = app.add_subcommand("embed", "Write built-in hashing embeddings for a corpus");
  embed->add_option("--corpus", embed_config.corpus_path, "Corpus JSONL file")
      ->required()
      ->envname("RECIPESIM_CORPUS");
  embed->add_option("--dim", embed_config.dimension, "Vector dimension")->capture_default_str();
  embed->add_option("--seed", embed_config.seed, "Hash seed")->capture_default_str();
  embed->add_option("--tag", embed_config.model_tag, "Model tag in the file header")
      ->capture_default_str();
  embed->add_flag("--binary", embed_config.binary, "Write the binary float32 form");
  embed->add_option("-o,--output", embed_config.output_path, "Embedding file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse failure is an input error.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      cli::run_ingest(ingest_corpus, std::cout);
    } else if (*score) {
      score_config.weights = recipesim::FusionWeights(w_sem, w_lex, w_nutr);
      score_config.convention = convention == "ordered" ? recipesim::PairConvention::ordered
                                                        : recipesim::PairConvention::unordered;
      score_config.on_missing =
          on_missing == "abort" ? recipesim::MissingPolicy::abort : recipesim::MissingPolicy::skip;
      const auto result = cli::run_score(score_config);
      std::cout << "pairs " << result.table.rows.size() << '\n'
                << "skipped " << result.skipped.size() << '\n';
    } else if (*analyze) {
      analyze_config.denominator = denominator == "unordered" ? recipesim::Denominator::unordered
                                                              : recipesim::Denominator::ordered;
      for (const auto& path : cli::run_analyze(analyze_config)) std::cout << path << '\n';
    } else if (*train) {
      train_config.kind = recipesim::parse_model_kind(model);
      train_config.settings.forest.max_depth = max_depth;
      cli::run_train(train_config);
      std::cout << train_config.output_path << '\n';
    } else if (*serve) {
      return run_serve(serve_config);
    } else if (*tasks) {
      if (fraction) tasks_config.fraction = fraction;
      cli::run_tasks(tasks_config);
      std::cout << tasks_config.output_path << '\n';
    } else if (*embed) {
      cli::run_embed(embed_config);
      std::cout << embed_config.output_path << '\n';
    }
  } catch (const recipesim::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
