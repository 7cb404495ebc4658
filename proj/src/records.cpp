#include "rbam/records.hpp"

#include <fstream>
#include <stdexcept>

#include "rbam/error.hpp"

namespace rbam {

nlohmann::ordered_json to_json(const PredictionRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["dataset"] = r.dataset;
  j["parent"] = r.parent;
  j["child"] = r.child;
  j["gold"] = std::string(to_string(r.gold));
  j["raw_text"] = r.raw_text;
  j["label_kind"] = r.failed() ? std::string("failed") : std::string(to_string(r.label.kind));
  if (!r.failed() && r.label.kind == LabelKind::Other) j["other_text"] = r.label.other_text;
  j["latency_seconds"] = r.latency_seconds;
  j["cached"] = r.cached;
  j["backend_id"] = r.backend_id;
  if (r.error) j["error"] = *r.error;
  return j;
}

PredictionRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  auto str = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string())
      throw std::invalid_argument(std::string("missing string field '") + key + "'");
    return j[key].get<std::string>();
  };
  PredictionRecord r;
  r.id = str("id");
  r.dataset = str("dataset");
  r.parent = j.contains("parent") && j["parent"].is_string() ? j["parent"].get<std::string>() : "";
  r.child = j.contains("child") && j["child"].is_string() ? j["child"].get<std::string>() : "";
  const auto gold = str("gold");
  const auto rel = parse_relation(gold);
  if (!rel) throw std::invalid_argument("gold '" + gold + "' is not support/attack");
  r.gold = *rel;
  r.raw_text = j.contains("raw_text") && j["raw_text"].is_string() ? j["raw_text"].get<std::string>()
                                                                    : "";
  const auto kind = str("label_kind");
  if (kind == "failed") {
    r.error = j.contains("error") && j["error"].is_string() ? j["error"].get<std::string>()
                                                            : std::string("backend failure");
  } else {
    const auto k = parse_label_kind(kind);
    if (!k) throw std::invalid_argument("unknown label_kind '" + kind + "'");
    r.label.kind = *k;
    if (*k == LabelKind::Other) r.label.other_text = str("other_text");
  }
  if (j.contains("latency_seconds")) {
    if (!j["latency_seconds"].is_number())
      throw std::invalid_argument("latency_seconds is not a number");
    r.latency_seconds = j["latency_seconds"].get<double>();
    if (r.latency_seconds < 0) throw std::invalid_argument("negative latency_seconds");
  }
  if (j.contains("cached")) {
    if (!j["cached"].is_boolean()) throw std::invalid_argument("cached is not a boolean");
    r.cached = j["cached"].get<bool>();
  }
  if (j.contains("backend_id") && j["backend_id"].is_string())
    r.backend_id = j["backend_id"].get<std::string>();
  return r;
}

std::string to_jsonl_line(const PredictionRecord& r) {
  return to_json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void write_records(std::ostream& out, const std::vector<PredictionRecord>& records) {
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
}

void write_records_file(const std::string& path, const std::vector<PredictionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_records(out, records);
}

std::vector<PredictionRecord> read_records(std::istream& in, const std::string& source) {
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw RecordError(source, lineno, std::string("invalid JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw RecordError(source, lineno, e.what());
    }
  }
  return out;
}

std::vector<PredictionRecord> read_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_records(in, path);
}

}  // namespace rbam
