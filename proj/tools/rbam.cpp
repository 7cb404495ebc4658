// rbam: command line front end for the relation-mining evaluation harness.
//
//   rbam run      --config <file> [--force]
//   rbam stats    --config <file>
//   rbam score    --records <file> [--policy ignore|count_as_error]
//   rbam report   --records <file> [--format csv|table] [--policy ...]
//   rbam validate --config <file>
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include "rbam/error.hpp"
#include "rbam/metrics.hpp"
#include "rbam/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

std::atomic<bool> g_interrupt{false};

extern "C" void on_sigint(int) { g_interrupt.store(true); }

rbam::LabelPolicy policy_or_throw(const std::string& name) {
  auto p = rbam::parse_label_policy(name);
  if (!p) throw rbam::ConfigError("unknown policy '" + name + "'");
  return *p;
}

int cmd_run(const std::string& config_path, bool force) {
  const auto config = rbam::load_run_config(config_path);
  std::stop_source stop;
  std::signal(SIGINT, on_sigint);
  std::jthread watcher([&stop](std::stop_token done) {
    while (!done.stop_requested()) {
      if (g_interrupt.load()) {
        stop.request_stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  rbam::RunOptions options;
  options.force = force;
  options.stop = stop.get_token();
  const auto result = rbam::run(config, options);
  watcher.request_stop();

  for (const auto& l : result.load_reports)
    std::cerr << l.dataset << ": " << l.emitted << " pairs, " << l.dropped << " dropped\n";
  if (result.interrupted) {
    std::cerr << "interrupted after " << result.records.size() << " pairs; re-run to resume\n";
    return kRuntime;
  }
  std::cerr << result.records.size() << " records (" << result.resumed << " resumed, "
            << result.executed << " executed) written to " << config.output_dir << "\n";
  rbam::render_table(std::cout, result.table);
  return kOk;
}

int cmd_stats(const std::string& config_path) {
  const auto config = rbam::load_run_config(config_path);
  rbam::render_stats(std::cout, rbam::corpus_stats(config));
  return kOk;
}

int cmd_validate(const std::string& config_path) {
  const auto config = rbam::load_run_config(config_path);
  const auto violations = rbam::validate_run_config(config);
  if (violations.empty()) {
    std::cout << "ok\n";
    return kOk;
  }
  for (const auto& v : violations) std::cout << "violation: " << v << '\n';
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support/attack relation mining evaluation harness"};
  app.require_subcommand(1);

  std::string config_path, records_path, policy = "ignore", format = "table";
  bool force = false;

  auto* run = app.add_subcommand("run", "Run every configured pair through the backend");
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_flag("--force", force, "Overwrite an existing run in output_dir");

  auto* stats = app.add_subcommand("stats", "Corpus counts and length statistics");
  stats->add_option("--config", config_path, "Run configuration (JSON)")->required();

  auto* score = app.add_subcommand("score", "Score a predictions file, print summary JSON");
  score->add_option("--records", records_path, "PredictionRecord JSONL")->required();
  score->add_option("--policy", policy, "Extra-label policy")
      ->check(CLI::IsMember({"ignore", "count_as_error"}));

  auto* report = app.add_subcommand("report", "Render a records file as a results table");
  report->add_option("--records", records_path, "PredictionRecord JSONL")->required();
  report->add_option("--format", format, "csv or table")->check(CLI::IsMember({"csv", "table"}));
  report->add_option("--policy", policy, "Extra-label policy")
      ->check(CLI::IsMember({"ignore", "count_as_error"}));

  auto* validate = app.add_subcommand("validate", "Check a run configuration and its prompt config");
  validate->add_option("--config", config_path, "Run configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, force);
    if (*stats) return cmd_stats(config_path);
    if (*validate) return cmd_validate(config_path);
    if (*score) {
      const auto table = rbam::score_predictions_file(records_path, policy_or_throw(policy));
      std::cout << rbam::summary_to_json(table).dump(2) << '\n';
      return kOk;
    }
    if (*report) {
      const auto table = rbam::score_predictions_file(records_path, policy_or_throw(policy));
      if (format == "csv") rbam::render_csv(std::cout, table);
      else rbam::render_table(std::cout, table);
      return kOk;
    }
  } catch (const rbam::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
