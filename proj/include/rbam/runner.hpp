#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "rbam/backend.hpp"
#include "rbam/corpus.hpp"
#include "rbam/labeling.hpp"
#include "rbam/metrics.hpp"
#include "rbam/prompting.hpp"
#include "rbam/records.hpp"

namespace rbam {

struct DatasetEntry {
  DatasetDescriptor descriptor;
  std::string path;
};

enum class BackendKind { Http, Mock, Replay };

struct MockSettings {
  enum class Mode { Oracle, Constant, Script } mode = Mode::Oracle;
  std::string answer = "support";       // Constant
  std::vector<std::string> answers;     // Script, cycled in call order
  std::optional<double> latency_seconds;
};

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  HttpSettings http;
  MockSettings mock;
  std::string cache_path;  // required for Replay; optional record-through otherwise
  bool probe = true;
};

struct RunConfig {
  std::vector<DatasetEntry> datasets;
  std::string prompt_config_path;  // empty: built-in default
  BackendConfig backend;
  GenerationParams generation;
  LabelPolicy label_policy = LabelPolicy::Ignore;
  int concurrency_limit = 4;
  std::string output_dir = "rbam-out";
  std::uint64_t seed = 0;
};

/// Parses a run configuration. Relative paths resolve against `base_dir`.
/// Backend credentials may come from the environment (HttpSettings::api_key_env).
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

/// Every problem with the config, including missing referenced files and
/// prompt-config violations. Empty when valid.
std::vector<std::string> validate_run_config(const RunConfig& config);

struct WorkItem {
  ArgumentPair pair;
  std::string prompt;
};

struct PreparedRun {
  PromptConfig prompt_config;
  std::vector<WorkItem> items;  // input order: datasets in config order, pairs in file order
  std::vector<LoadReport> load_reports;
};

/// Loads the corpora and renders every prompt.
PreparedRun prepare_run(const RunConfig& config);

/// Backend described by the config. Oracle mocks answer each prompt with
/// the gold word of its pair.
std::unique_ptr<Backend> make_backend(const RunConfig& config, const PreparedRun& prepared);

struct RunOptions {
  bool force = false;
  std::stop_token stop;          // stop dispatching new pairs when requested
  Backend* backend = nullptr;    // overrides the configured backend when set
};

struct RunResult {
  std::vector<PredictionRecord> records;  // complete only when !interrupted
  SummaryTable table;
  std::vector<LoadReport> load_reports;
  std::size_t resumed = 0;    // records taken from a previous partial run
  std::size_t executed = 0;   // pairs sent to the backend in this run
  std::size_t external_calls = 0;
  bool interrupted = false;
};

/// Output file names inside RunConfig::output_dir.
inline constexpr const char* kRecordsFile = "records.jsonl";
inline constexpr const char* kPartialFile = "records.partial.jsonl";
inline constexpr const char* kSummaryCsv = "summary.csv";
inline constexpr const char* kSummaryTxt = "summary.txt";
inline constexpr const char* kReportJson = "report.json";

/// Drives every pair through the backend with at most concurrency_limit
/// calls in flight. Finished pairs are checkpointed to the partial file and
/// a re-run resumes from it. Throws ConfigError on an invalid config or an
/// output collision (existing records file without force), BackendError if
/// the startup probe fails.
RunResult run(const RunConfig& config, const RunOptions& options = {});

struct StatsRow {
  std::string dataset;
  CorpusStats stats;
  LoadReport report;
};

std::vector<StatsRow> corpus_stats(const RunConfig& config);
void render_stats(std::ostream& out, const std::vector<StatsRow>& rows);

}  // namespace rbam
