#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbam/labeling.hpp"
#include "rbam/records.hpp"
#include "rbam/relation.hpp"

namespace rbam {

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const ClassCounts&) const = default;
};

struct ScoredPrediction {
  Relation gold;
  Disposition disposition;
};

/// Confusion counts for `cls` over the dispositions that enter scoring;
/// Excluded entries are skipped, Error entries are misses for their gold.
ClassCounts class_counts(std::span<const ScoredPrediction> predictions, Relation cls);

/// 2tp / (2tp + fp + fn). Absent when no scored pair has gold `cls`.
std::optional<double> class_f1(std::span<const ScoredPrediction> predictions, Relation cls);

/// Count-weighted mean of the two class scores. A class with zero count
/// contributes nothing (its score may be absent). Throws std::invalid_argument
/// when both counts are zero or a counted class has no score.
double both_f1(std::optional<double> f1_support, std::optional<double> f1_attack,
               std::size_t n_support, std::size_t n_attack);

struct LatencySummary {
  double mean_seconds = 0.0;
  std::size_t samples = 0;
  bool replayed = false;  // every sample came from the replay cache
};

/// Mean latency over live (non-cached) records; if every record was
/// replayed, the mean of the recorded latencies. Failed records never count.
std::optional<LatencySummary> aggregate_latency(std::span<const PredictionRecord> records);

struct DatasetScores {
  std::string dataset;
  std::optional<double> f1_support;
  std::optional<double> f1_attack;
  std::optional<double> f1_both;  // absent: nothing scored (dataset not evaluated)
  std::size_t n_support = 0;      // gold counts over scored pairs
  std::size_t n_attack = 0;
  std::size_t n_ignored = 0;
  std::size_t n_failed = 0;
  std::map<std::string, std::size_t> ignored_labels;
  std::optional<LatencySummary> latency;

  std::size_t total() const { return n_support + n_attack + n_ignored + n_failed; }
};

/// Scores published (or otherwise precomputed) class F1s: fills f1_both
/// from the counts.
DatasetScores scores_from_f1(std::string dataset, std::optional<double> f1_support,
                             std::optional<double> f1_attack, std::size_t n_support,
                             std::size_t n_attack);

/// Scores the records of one dataset under the label policy.
DatasetScores score_dataset(std::span<const PredictionRecord> records, LabelPolicy policy);

struct SummaryTable {
  std::vector<DatasetScores> rows;
  double avg_support = 0.0;
  double avg_attack = 0.0;
  double avg_both = 0.0;
  double macro_f1 = 0.0;
  std::size_t evaluated = 0;  // rows entering the averages
  std::optional<LatencySummary> latency;
};

/// Cross-dataset means over the evaluated rows. A missing class score counts
/// as 0 for an evaluated row; rows without f1_both are left out entirely.
/// macro_f1 = (avg_support + avg_attack) / 2. Independent of row order.
SummaryTable summarize(std::vector<DatasetScores> rows);

/// Groups by dataset (first-appearance order), scores each group, summarizes.
SummaryTable score_records(std::span<const PredictionRecord> records, LabelPolicy policy);

/// Reads a PredictionRecord JSONL file and scores it.
SummaryTable score_predictions_file(const std::string& path, LabelPolicy policy = LabelPolicy::Ignore);

/// Round half away from zero to a whole percentage.
long round_percent(double fraction);

/// Aligned text table: one row per dataset with "support / attack / both"
/// percentages, then Average, Macro F1 and Inference Time rows.
void render_table(std::ostream& out, const SummaryTable& table, const std::string& column = "F1");
void render_csv(std::ostream& out, const SummaryTable& table);

/// Per-dataset {label -> count} tallies of ignored outputs.
nlohmann::ordered_json ignored_tally_json(const SummaryTable& table);
nlohmann::ordered_json summary_to_json(const SummaryTable& table);

}  // namespace rbam
