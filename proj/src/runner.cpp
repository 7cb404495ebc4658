#include "rbam/runner.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rbam/error.hpp"

namespace rbam {

namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& base_dir, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PredictionRecord make_record(const ArgumentPair& pair) {
  PredictionRecord r;
  r.id = pair.id;
  r.dataset = pair.dataset;
  r.parent = pair.parent_text;
  r.child = pair.child_text;
  r.gold = pair.gold;
  return r;
}

std::string partial_line(std::size_t index, const PredictionRecord& r) {
  nlohmann::ordered_json j;
  j["index"] = index;
  j["record"] = to_json(r);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  RunConfig c;
  try {
    for (const auto& d : j.at("datasets")) {
      DatasetEntry e;
      const auto name = d.at("name").get<std::string>();
      const auto ds = parse_dataset(name);
      if (!ds) throw ConfigError("unknown dataset '" + name + "'");
      e.descriptor = DatasetDescriptor::for_dataset(*ds);
      if (d.contains("format")) {
        const auto f = d["format"].get<std::string>();
        const auto fmt = parse_source_format(f);
        if (!fmt) throw ConfigError("unknown source format '" + f + "'");
        e.descriptor.source_format = *fmt;
      }
      if (d.value("use_published_counts", false)) {
        if (const auto pc = published_counts(*ds)) {
          e.descriptor.expected_support = pc->support;
          e.descriptor.expected_attack = pc->attack;
        }
      }
      if (d.contains("expected_support"))
        e.descriptor.expected_support = d["expected_support"].get<std::size_t>();
      if (d.contains("expected_attack"))
        e.descriptor.expected_attack = d["expected_attack"].get<std::size_t>();
      e.path = resolve(base_dir, d.at("path").get<std::string>());
      c.datasets.push_back(std::move(e));
    }
    if (j.contains("prompt_config"))
      c.prompt_config_path = resolve(base_dir, j["prompt_config"].get<std::string>());

    if (j.contains("backend")) {
      const auto& b = j["backend"];
      const auto kind = b.value("kind", std::string("mock"));
      if (kind == "http") c.backend.kind = BackendKind::Http;
      else if (kind == "mock") c.backend.kind = BackendKind::Mock;
      else if (kind == "replay") c.backend.kind = BackendKind::Replay;
      else throw ConfigError("unknown backend kind '" + kind + "'");
      if (b.contains("cache")) c.backend.cache_path = resolve(base_dir, b["cache"].get<std::string>());
      c.backend.probe = b.value("probe", true);
      if (b.contains("http")) {
        const auto& h = b["http"];
        auto& s = c.backend.http;
        s.base_url = h.value("base_url", s.base_url);
        s.model = h.value("model", s.model);
        s.api_key = h.value("api_key", s.api_key);
        s.api_key_env = h.value("api_key_env", s.api_key_env);
        s.timeout_seconds = h.value("timeout_seconds", s.timeout_seconds);
        if (h.contains("retry")) {
          const auto& r = h["retry"];
          s.retry.max_attempts = r.value("max_attempts", s.retry.max_attempts);
          s.retry.initial_backoff_seconds =
              r.value("initial_backoff_seconds", s.retry.initial_backoff_seconds);
          s.retry.backoff_multiplier = r.value("backoff_multiplier", s.retry.backoff_multiplier);
        }
      }
      if (b.contains("mock")) {
        const auto& m = b["mock"];
        auto& s = c.backend.mock;
        const auto mode = m.value("mode", std::string("oracle"));
        if (mode == "oracle") s.mode = MockSettings::Mode::Oracle;
        else if (mode == "constant") s.mode = MockSettings::Mode::Constant;
        else if (mode == "script") s.mode = MockSettings::Mode::Script;
        else throw ConfigError("unknown mock mode '" + mode + "'");
        s.answer = m.value("answer", s.answer);
        if (m.contains("answers")) s.answers = m["answers"].get<std::vector<std::string>>();
        if (m.contains("latency_seconds")) s.latency_seconds = m["latency_seconds"].get<double>();
      }
    }
    if (j.contains("generation")) c.generation = GenerationParams::from_json(j["generation"]);
    if (j.contains("label_policy")) {
      const auto p = j["label_policy"].get<std::string>();
      const auto policy = parse_label_policy(p);
      if (!policy) throw ConfigError("unknown label_policy '" + p + "'");
      c.label_policy = *policy;
    }
    c.concurrency_limit = j.value("concurrency_limit", c.concurrency_limit);
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    else c.output_dir = resolve(base_dir, c.output_dir);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  const auto base = fs::path(path).parent_path().string();
  return parse_run_config(read_file(path), base.empty() ? "." : base);
}

std::vector<std::string> validate_run_config(const RunConfig& config) {
  std::vector<std::string> v;
  if (config.datasets.empty()) v.push_back("no datasets configured");
  for (const auto& d : config.datasets) {
    std::error_code ec;
    if (!fs::exists(d.path, ec))
      v.push_back(std::string(to_string(d.descriptor.name)) + ": path not found: " + d.path);
  }
  if (config.concurrency_limit < 1) v.push_back("concurrency_limit must be >= 1");
  for (const auto& g : config.generation.violations()) v.push_back("generation: " + g);
  if (config.backend.kind == BackendKind::Replay) {
    std::error_code ec;
    if (config.backend.cache_path.empty()) v.push_back("replay backend needs a cache path");
    else if (!fs::exists(config.backend.cache_path, ec))
      v.push_back("replay cache not found: " + config.backend.cache_path);
  }
  if (config.backend.kind == BackendKind::Http && config.backend.http.retry.max_attempts < 1)
    v.push_back("retry.max_attempts must be >= 1");
  if (config.backend.kind == BackendKind::Mock &&
      config.backend.mock.mode == MockSettings::Mode::Script && config.backend.mock.answers.empty())
    v.push_back("scripted mock needs answers");
  if (config.output_dir.empty()) {
    v.push_back("output_dir is empty");
  } else {
    // The nearest existing ancestor must be a writable directory.
    std::error_code ec;
    fs::path p = fs::absolute(config.output_dir, ec);
    while (!p.empty() && !fs::exists(p, ec) && p != p.parent_path()) p = p.parent_path();
    if (!fs::is_directory(p, ec)) {
      v.push_back("output_dir is not a directory: " + config.output_dir);
    } else {
      const auto perms = fs::status(p, ec).permissions();
      if ((perms & (fs::perms::owner_write | fs::perms::group_write | fs::perms::others_write)) ==
          fs::perms::none)
        v.push_back("output_dir is not writable: " + config.output_dir);
    }
  }
  if (config.prompt_config_path.empty()) {
    for (const auto& p : validate_config(default_prompt_config())) v.push_back("prompt: " + p);
  } else {
    try {
      for (const auto& p : validate_config(load_prompt_config(config.prompt_config_path)))
        v.push_back("prompt: " + p);
    } catch (const ConfigError& e) {
      v.push_back(e.what());
    }
  }
  return v;
}

PreparedRun prepare_run(const RunConfig& config) {
  PreparedRun p;
  p.prompt_config = config.prompt_config_path.empty() ? default_prompt_config()
                                                      : load_prompt_config(config.prompt_config_path);
  for (const auto& d : config.datasets) {
    LoadReport report;
    auto pairs = load_dataset(d.descriptor, d.path, &report);
    p.load_reports.push_back(report);
    for (auto& pair : pairs) {
      auto prompt = build_prompt(p.prompt_config, pair);
      p.items.push_back({std::move(pair), std::move(prompt)});
    }
  }
  return p;
}

std::unique_ptr<Backend> make_backend(const RunConfig& config, const PreparedRun& prepared) {
  const auto& b = config.backend;
  std::unique_ptr<Backend> inner;
  if (b.kind == BackendKind::Http) {
    inner = std::make_unique<HttpBackend>(b.http);
  } else if (b.kind == BackendKind::Mock) {
    std::unique_ptr<MockBackend> mock;
    switch (b.mock.mode) {
      case MockSettings::Mode::Oracle: {
        std::map<std::string, std::string, std::less<>> answers;
        for (const auto& item : prepared.items)
          answers.try_emplace(item.prompt, prepared.prompt_config.word(item.pair.gold));
        mock = std::make_unique<MockBackend>(
            [answers = std::move(answers)](std::string_view prompt, std::size_t) -> std::string {
              auto it = answers.find(prompt);
              return it == answers.end() ? std::string() : it->second;
            },
            "mock:oracle");
        break;
      }
      case MockSettings::Mode::Constant:
        mock = MockBackend::constant(b.mock.answer);
        break;
      case MockSettings::Mode::Script:
        mock = MockBackend::scripted(b.mock.answers);
        break;
    }
    mock->set_scripted_latency(b.mock.latency_seconds);
    inner = std::move(mock);
  }
  if (b.kind == BackendKind::Replay || !b.cache_path.empty()) {
    if (b.cache_path.empty()) throw ConfigError("replay backend needs a cache path");
    return std::make_unique<CachingBackend>(std::make_shared<ReplayCache>(b.cache_path),
                                            std::move(inner));
  }
  return inner;
}

RunResult run(const RunConfig& config, const RunOptions& options) {
  if (const auto v = validate_run_config(config); !v.empty())
    throw ConfigError("invalid run config: " + v.front());

  const fs::path out_dir(config.output_dir);
  const fs::path records_path = out_dir / kRecordsFile;
  const fs::path partial_path = out_dir / kPartialFile;
  fs::create_directories(out_dir);
  if (fs::exists(records_path)) {
    if (!options.force)
      throw ConfigError("output collision: " + records_path.string() + " exists (use --force)");
    for (const char* f : {kRecordsFile, kPartialFile, kSummaryCsv, kSummaryTxt, kReportJson})
      fs::remove(out_dir / f);
  } else if (options.force) {
    fs::remove(partial_path);
  }

  RunResult result;
  auto prepared = prepare_run(config);
  result.load_reports = prepared.load_reports;
  const auto& items = prepared.items;

  std::unique_ptr<Backend> owned;
  Backend* backend = options.backend;
  if (!backend) {
    owned = make_backend(config, prepared);
    backend = owned.get();
  }
  if (config.backend.probe) backend->probe();
  const std::size_t calls_before = backend->external_calls();

  std::vector<std::optional<PredictionRecord>> slots(items.size());
  {
    std::ifstream in(partial_path, std::ios::binary);
    std::string line;
    std::size_t lineno = 0;
    while (in && std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::size_t index;
      PredictionRecord rec;
      try {
        const auto j = nlohmann::json::parse(line);
        index = j.at("index").get<std::size_t>();
        rec = record_from_json(j.at("record"));
      } catch (const std::exception&) {
        if (in.peek() == std::char_traits<char>::eof()) break;  // torn last line
        throw RecordError(partial_path.string(), lineno, "corrupt checkpoint line");
      }
      if (index >= items.size() || items[index].pair.id != rec.id ||
          items[index].pair.dataset != rec.dataset)
        throw ConfigError(partial_path.string() +
                          " does not match this configuration (use --force to restart)");
      if (!slots[index]) ++result.resumed;
      slots[index] = std::move(rec);
    }
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!slots[i]) todo.push_back(i);

  std::ofstream checkpoint(partial_path, std::ios::binary | std::ios::app);
  if (!checkpoint) throw Error("cannot write " + partial_path.string());
  std::mutex sink;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> executed{0};

  auto worker = [&] {
    for (;;) {
      if (options.stop.stop_requested()) return;
      const std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      const std::size_t index = todo[k];
      const auto& item = items[index];
      PredictionRecord rec = make_record(item.pair);
      try {
        const auto resp = backend->complete(item.prompt, config.generation);
        rec.raw_text = resp.raw_text;
        rec.label = normalize(resp.raw_text);
        rec.latency_seconds = resp.latency_seconds;
        rec.cached = resp.cached;
        rec.backend_id = resp.backend_id;
      } catch (const std::exception& e) {
        rec.error = e.what();
        rec.backend_id = backend->id();
      }
      ++executed;
      std::lock_guard lock(sink);
      checkpoint << partial_line(index, rec) << '\n';
      checkpoint.flush();
      slots[index] = std::move(rec);
    }
  };

  const auto threads =
      std::min<std::size_t>(static_cast<std::size_t>(config.concurrency_limit), todo.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  checkpoint.close();
  result.executed = executed.load();
  result.external_calls = backend->external_calls() - calls_before;

  for (auto& s : slots) {
    if (!s) {
      result.interrupted = true;
      continue;
    }
    result.records.push_back(*s);
  }
  result.table = score_records(result.records, config.label_policy);
  if (result.interrupted) return result;

  write_records_file(records_path.string(), result.records);
  {
    std::ofstream csv(out_dir / kSummaryCsv, std::ios::binary);
    render_csv(csv, result.table);
    std::ofstream txt(out_dir / kSummaryTxt, std::ios::binary);
    render_table(txt, result.table);
  }
  {
    nlohmann::ordered_json report;
    report["summary"] = summary_to_json(result.table);
    report["label_policy"] = std::string(to_string(config.label_policy));
    report["seed"] = config.seed;
    report["generation"] = config.generation.to_json();
    report["loads"] = nlohmann::ordered_json::array();
    for (const auto& l : result.load_reports) {
      nlohmann::ordered_json lj;
      lj["dataset"] = l.dataset;
      lj["native_records"] = l.native_records;
      lj["emitted"] = l.emitted;
      lj["dropped"] = l.dropped;
      lj["dropped_by_label"] = l.dropped_by_label;
      report["loads"].push_back(lj);
    }
    std::ofstream out(out_dir / kReportJson, std::ios::binary);
    out << report.dump(2) << '\n';
  }
  fs::remove(partial_path);
  return result;
}

std::vector<StatsRow> corpus_stats(const RunConfig& config) {
  std::vector<StatsRow> rows;
  for (const auto& d : config.datasets) {
    StatsRow row;
    row.dataset = std::string(to_string(d.descriptor.name));
    const auto pairs = load_dataset(d.descriptor, d.path, &row.report);
    row.stats = compute_stats(pairs);
    rows.push_back(std::move(row));
  }
  return rows;
}

void render_stats(std::ostream& out, const std::vector<StatsRow>& rows) {
  out << std::left << std::setw(22) << "dataset" << std::right << std::setw(10) << "#support"
      << std::setw(10) << "#attack" << std::setw(10) << "total" << std::setw(12) << "avg_words"
      << std::setw(12) << "avg_chars" << std::setw(10) << "dropped" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(22) << r.dataset << std::right << std::setw(10)
        << r.stats.n_support << std::setw(10) << r.stats.n_attack << std::setw(10)
        << (r.stats.n_support + r.stats.n_attack) << std::fixed << std::setprecision(2)
        << std::setw(12) << r.stats.avg_words << std::setw(12) << r.stats.avg_chars
        << std::setw(10) << r.report.dropped << '\n';
    out.unsetf(std::ios::fixed);
  }
}

}  // namespace rbam
