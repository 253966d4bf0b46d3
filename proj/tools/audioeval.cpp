// audioeval — evaluation harness CLI.
//
//   audioeval run        --config cfg.yaml [--output DIR] [--category NAME]...
//   audioeval score      --predictions p.jsonl --config cfg.yaml [--output DIR]
//   audioeval list-tasks --config cfg.yaml [--category NAME]
//   audioeval mock-serve --port N [--behavior behavior.yaml]
//
// Exit codes: 0 ok; 1 config/IO failure; 2 a task produced zero successful
// predictions (run) or there was nothing to score (score).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "audioeval/audioeval.hpp"

namespace {

using namespace audioeval;

std::vector<config::Category> parse_categories(const std::vector<std::string>& names) {
  std::vector<config::Category> out;
  for (const auto& name : names) {
    auto c = config::parse_category(name);
    if (!c)
      throw ConfigSchemaError("--category", "unknown category \"" + name +
                                                "\" (valid: " +
                                                config::valid_categories_hint() + ")");
    out.push_back(*c);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& output_dir,
            const std::vector<std::string>& categories, bool quiet) {
  auto cfg = config::load_config_file(config_path);
  runner::RunOptions opts;
  if (!output_dir.empty()) opts.output_dir_override = output_dir;
  opts.categories = parse_categories(categories);
  opts.verbosity = quiet ? 0 : 1;
  auto outcome = runner::run_evaluation(cfg, opts);
  if (!quiet)
    std::fprintf(stderr, "[audioeval] wrote %s/{results.jsonl,report.json,timing.json,summary.md,predictions.jsonl}\n",
                 outcome.output_dir.c_str());
  return outcome.exit_code;
}

int cmd_score(const std::string& predictions_path, const std::string& config_path,
              const std::string& output_dir, bool quiet) {
  auto cfg = config::load_config_file(config_path);
  runner::RunOptions opts;
  if (!output_dir.empty()) opts.output_dir_override = output_dir;
  opts.verbosity = quiet ? 0 : 1;
  auto outcome = runner::score_predictions(cfg, predictions_path, opts);
  if (outcome.exit_code == 2) {
    std::fprintf(stderr, "audioeval: no predictions to score\n");
    return 2;
  }
  if (!quiet)
    std::fprintf(stderr, "[audioeval] wrote %s/{results.jsonl,report.json,timing.json,summary.md}\n",
                 outcome.output_dir.c_str());
  return outcome.exit_code;
}

int cmd_list_tasks(const std::string& config_path,
                   const std::vector<std::string>& categories) {
  auto cfg = config::load_config_file(config_path);
  auto selected = parse_categories(categories);

  std::printf("%-24s %-30s %8s  %s\n", "task", "category", "samples", "metrics");
  for (const auto& task : cfg.tasks) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), task.category) == selected.end())
      continue;
    std::string size = "?";
    try {
      size = std::to_string(dataset::load_manifest(task.dataset_path).size());
    } catch (const std::exception&) {
      // unreadable manifest is not a listing error
    }
    std::string metrics_list;
    for (const auto& m : task.metric_names) {
      if (!metrics_list.empty()) metrics_list += ",";
      metrics_list += m;
    }
    std::printf("%-24s %-30s %8s  %s\n", task.task_name.c_str(),
                config::category_name(task.category).c_str(), size.c_str(),
                metrics_list.c_str());
  }
  return 0;
}

int cmd_mock_serve(int port, const std::string& behavior_path) {
  mock::MockBehavior behavior;
  if (!behavior_path.empty()) {
    std::ifstream f(behavior_path);
    if (!f) throw IoError("cannot open behavior file: " + behavior_path);
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    YAML::Node root;
    try {
      root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
      throw ConfigSyntaxError(std::string("behavior syntax error: ") + e.what());
    }
    behavior = mock::MockBehavior::from_json(config::detail::yaml_to_json(root));
  }
  mock::MockServer server(behavior, port);
  std::printf("mock server listening on %s (POST /chat/completions, GET /stats, POST /reset)\n",
              server.base_url().c_str());
  std::fflush(stdout);
  for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audioeval — concurrent evaluation harness for audio-capable chat endpoints"};
  app.require_subcommand(1);

  std::string config_path, output_dir, predictions_path, behavior_path;
  std::vector<std::string> categories;
  bool quiet = false;
  int port = 8008;

  auto* run = app.add_subcommand("run", "run an evaluation");
  run->add_option("--config", config_path, "config file (YAML)")->required();
  run->add_option("--output", output_dir, "output directory override");
  run->add_option("--category", categories, "restrict to task categories");
  run->add_flag("--quiet,-q", quiet, "suppress progress output");

  auto* score = app.add_subcommand("score", "re-score stored predictions");
  score->add_option("--predictions", predictions_path, "predictions.jsonl from a run")
      ->required();
  score->add_option("--config", config_path, "config file (YAML)")->required();
  score->add_option("--output", output_dir, "output directory override");
  score->add_flag("--quiet,-q", quiet, "suppress progress output");

  auto* list = app.add_subcommand("list-tasks", "list configured tasks");
  list->add_option("--config", config_path, "config file (YAML)")->required();
  list->add_option("--category", categories, "restrict to task categories");

  auto* mock_serve = app.add_subcommand("mock-serve", "run the mock endpoint server");
  mock_serve->add_option("--port", port, "TCP port (0 picks a free one)");
  mock_serve->add_option("--behavior", behavior_path, "behavior file (YAML)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, output_dir, categories, quiet);
    if (score->parsed())
      return cmd_score(predictions_path, config_path, output_dir, quiet);
    if (list->parsed()) return cmd_list_tasks(config_path, categories);
    if (mock_serve->parsed()) return cmd_mock_serve(port, behavior_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "audioeval: %s\n", e.what());
    return 1;
  }
  return 0;
}
