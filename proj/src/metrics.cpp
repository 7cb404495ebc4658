#include "rbam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "rbam/error.hpp"

namespace rbam {

ClassCounts class_counts(std::span<const ScoredPrediction> predictions, Relation cls) {
  ClassCounts c;
  for (const auto& p : predictions) {
    using K = Disposition::Kind;
    if (p.disposition.kind == K::Excluded) continue;
    const bool gold_is = p.gold == cls;
    const bool pred_is = p.disposition.kind == K::Scored && p.disposition.predicted == cls;
    if (gold_is && pred_is) ++c.tp;
    else if (gold_is) ++c.fn;
    else if (pred_is) ++c.fp;
  }
  return c;
}

std::optional<double> class_f1(std::span<const ScoredPrediction> predictions, Relation cls) {
  const auto c = class_counts(predictions, cls);
  if (c.tp + c.fn == 0) return std::nullopt;
  return 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

double both_f1(std::optional<double> f1_support, std::optional<double> f1_attack,
               std::size_t n_support, std::size_t n_attack) {
  if (n_support + n_attack == 0) throw std::invalid_argument("both_f1: zero total count");
  if (n_support > 0 && !f1_support) throw std::invalid_argument("both_f1: support score missing");
  if (n_attack > 0 && !f1_attack) throw std::invalid_argument("both_f1: attack score missing");
  double sum = 0.0;
  if (n_support > 0) sum += *f1_support * static_cast<double>(n_support);
  if (n_attack > 0) sum += *f1_attack * static_cast<double>(n_attack);
  return sum / static_cast<double>(n_support + n_attack);
}

std::optional<LatencySummary> aggregate_latency(std::span<const PredictionRecord> records) {
  double live_sum = 0.0, cached_sum = 0.0;
  std::size_t live = 0, cached = 0;
  for (const auto& r : records) {
    if (r.failed()) continue;
    if (r.cached) {
      cached_sum += r.latency_seconds;
      ++cached;
    } else {
      live_sum += r.latency_seconds;
      ++live;
    }
  }
  if (live > 0) return LatencySummary{live_sum / static_cast<double>(live), live, false};
  if (cached > 0) return LatencySummary{cached_sum / static_cast<double>(cached), cached, true};
  return std::nullopt;
}

DatasetScores scores_from_f1(std::string dataset, std::optional<double> f1_support,
                             std::optional<double> f1_attack, std::size_t n_support,
                             std::size_t n_attack) {
  DatasetScores s;
  s.dataset = std::move(dataset);
  s.f1_support = n_support > 0 ? f1_support : std::nullopt;
  s.f1_attack = n_attack > 0 ? f1_attack : std::nullopt;
  s.n_support = n_support;
  s.n_attack = n_attack;
  if (n_support + n_attack > 0) s.f1_both = both_f1(s.f1_support, s.f1_attack, n_support, n_attack);
  return s;
}

DatasetScores score_dataset(std::span<const PredictionRecord> records, LabelPolicy policy) {
  DatasetScores s;
  if (!records.empty()) s.dataset = records.front().dataset;
  std::vector<ScoredPrediction> scored;
  scored.reserve(records.size());
  for (const auto& r : records) {
    if (r.failed()) {
      ++s.n_failed;
      continue;
    }
    const auto d = apply_policy(r.label, policy);
    if (d.kind == Disposition::Kind::Excluded) {
      ++s.n_ignored;
      ++s.ignored_labels[r.label.kind == LabelKind::Other ? r.label.other_text : "<unparseable>"];
      continue;
    }
    (r.gold == Relation::Support ? s.n_support : s.n_attack)++;
    scored.push_back({r.gold, d});
  }
  s.f1_support = class_f1(scored, Relation::Support);
  s.f1_attack = class_f1(scored, Relation::Attack);
  if (s.n_support + s.n_attack > 0)
    s.f1_both = both_f1(s.f1_support, s.f1_attack, s.n_support, s.n_attack);
  s.latency = aggregate_latency(records);
  return s;
}

SummaryTable summarize(std::vector<DatasetScores> rows) {
  SummaryTable t;
  std::vector<const DatasetScores*> evaluated;
  for (const auto& r : rows)
    if (r.f1_both) evaluated.push_back(&r);
  // Fixed summation order so the result does not depend on row order.
  std::sort(evaluated.begin(), evaluated.end(), [](const DatasetScores* a, const DatasetScores* b) {
    auto key = [](const DatasetScores* s) {
      return std::tuple(s->dataset, s->f1_support.value_or(-1), s->f1_attack.value_or(-1),
                        *s->f1_both);
    };
    return key(a) < key(b);
  });
  for (const auto* r : evaluated) {
    t.avg_support += r->f1_support.value_or(0.0);
    t.avg_attack += r->f1_attack.value_or(0.0);
    t.avg_both += *r->f1_both;
  }
  t.evaluated = evaluated.size();
  if (t.evaluated > 0) {
    const auto n = static_cast<double>(t.evaluated);
    t.avg_support /= n;
    t.avg_attack /= n;
    t.avg_both /= n;
  }
  t.macro_f1 = (t.avg_support + t.avg_attack) / 2.0;
  t.rows = std::move(rows);
  return t;
}

SummaryTable score_records(std::span<const PredictionRecord> records, LabelPolicy policy) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<PredictionRecord>> groups;
  for (const auto& r : records) {
    auto [it, inserted] = groups.try_emplace(r.dataset);
    if (inserted) order.push_back(r.dataset);
    it->second.push_back(r);
  }
  std::vector<DatasetScores> rows;
  for (const auto& name : order) rows.push_back(score_dataset(groups[name], policy));
  auto t = summarize(std::move(rows));
  t.latency = aggregate_latency(records);
  return t;
}

SummaryTable score_predictions_file(const std::string& path, LabelPolicy policy) {
  const auto records = read_records_file(path);
  return score_records(records, policy);
}

long round_percent(double fraction) { return std::lround(fraction * 100.0); }

namespace {

std::string pct(const std::optional<double>& v) {
  return v ? std::to_string(round_percent(*v)) : std::string("-");
}

std::string latency_text(const std::optional<LatencySummary>& l) {
  if (!l) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", l->mean_seconds);
  return std::string(buf) + (l->replayed ? " (replayed)" : "");
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string full(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

}  // namespace

void render_table(std::ostream& out, const SummaryTable& table, const std::string& column) {
  std::size_t width = std::string("Inference Time (s)").size();
  for (const auto& r : table.rows) width = std::max(width, r.dataset.size());
  width += 2;
  out << pad("", width) << column << " (support / attack / both)\n";
  for (const auto& r : table.rows)
    out << pad(r.dataset, width) << pct(r.f1_support) << " / " << pct(r.f1_attack) << " / "
        << pct(r.f1_both) << '\n';
  out << pad("Average", width) << round_percent(table.avg_support) << " / "
      << round_percent(table.avg_attack) << " / " << round_percent(table.avg_both) << '\n';
  out << pad("Macro F1", width) << round_percent(table.macro_f1) << '\n';
  out << pad("Inference Time (s)", width) << latency_text(table.latency) << '\n';
}

void render_csv(std::ostream& out, const SummaryTable& table) {
  out << "dataset,support,attack,both,f1_support,f1_attack,f1_both,n_support,n_attack,n_ignored,"
         "n_failed,mean_latency_seconds\n";
  for (const auto& r : table.rows) {
    out << r.dataset << ',' << (r.f1_support ? pct(r.f1_support) : "") << ','
        << (r.f1_attack ? pct(r.f1_attack) : "") << ',' << (r.f1_both ? pct(r.f1_both) : "")
        << ',' << full(r.f1_support) << ',' << full(r.f1_attack) << ',' << full(r.f1_both) << ','
        << r.n_support << ',' << r.n_attack << ',' << r.n_ignored << ',' << r.n_failed << ','
        << (r.latency ? full(r.latency->mean_seconds) : "") << '\n';
  }
  out << "Average," << round_percent(table.avg_support) << ',' << round_percent(table.avg_attack)
      << ',' << round_percent(table.avg_both) << ',' << full(table.avg_support) << ','
      << full(table.avg_attack) << ',' << full(table.avg_both) << ",,,,,"
      << (table.latency ? full(table.latency->mean_seconds) : "") << '\n';
  out << "Macro F1,,," << round_percent(table.macro_f1) << ",,," << full(table.macro_f1)
      << ",,,,,\n";
}

nlohmann::ordered_json ignored_tally_json(const SummaryTable& table) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& r : table.rows) {
    if (r.ignored_labels.empty()) continue;
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (const auto& [label, n] : r.ignored_labels) labels[label] = n;
    j[r.dataset] = labels;
  }
  return j;
}

nlohmann::ordered_json summary_to_json(const SummaryTable& table) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  auto latency = [](const std::optional<LatencySummary>& l) -> nlohmann::ordered_json {
    if (!l) return nullptr;
    return {{"mean_seconds", l->mean_seconds}, {"samples", l->samples}, {"replayed", l->replayed}};
  };
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json row;
    row["dataset"] = r.dataset;
    row["f1_support"] = opt(r.f1_support);
    row["f1_attack"] = opt(r.f1_attack);
    row["f1_both"] = opt(r.f1_both);
    row["n_support"] = r.n_support;
    row["n_attack"] = r.n_attack;
    row["n_ignored"] = r.n_ignored;
    row["n_failed"] = r.n_failed;
    row["latency"] = latency(r.latency);
    j["rows"].push_back(row);
  }
  j["avg_support"] = table.avg_support;
  j["avg_attack"] = table.avg_attack;
  j["avg_both"] = table.avg_both;
  j["macro_f1"] = table.macro_f1;
  j["evaluated"] = table.evaluated;
  j["latency"] = latency(table.latency);
  j["ignored_labels"] = ignored_tally_json(table);
  return j;
}

}  // namespace rbam
