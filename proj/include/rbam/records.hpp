#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rbam/corpus.hpp"
#include "rbam/labeling.hpp"

namespace rbam {

/// One line of a predictions/records file. A record whose backend call
/// failed carries `error` and label_kind "failed".
struct PredictionRecord {
  std::string id;
  std::string dataset;
  std::string parent;
  std::string child;
  Relation gold = Relation::Support;
  std::string raw_text;
  NormalizedLabel label;
  double latency_seconds = 0.0;
  bool cached = false;
  std::string backend_id;
  std::optional<std::string> error;

  bool failed() const { return error.has_value(); }

  bool operator==(const PredictionRecord&) const = default;
};

nlohmann::ordered_json to_json(const PredictionRecord& r);
/// Throws std::invalid_argument describing the first problem.
PredictionRecord record_from_json(const nlohmann::json& j);

std::string to_jsonl_line(const PredictionRecord& r);

void write_records(std::ostream& out, const std::vector<PredictionRecord>& records);
void write_records_file(const std::string& path, const std::vector<PredictionRecord>& records);

/// Throws RecordError naming the offending line.
std::vector<PredictionRecord> read_records(std::istream& in, const std::string& source);
std::vector<PredictionRecord> read_records_file(const std::string& path);

}  // namespace rbam
