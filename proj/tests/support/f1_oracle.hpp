#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rbam/labeling.hpp"
#include "rbam/records.hpp"

// Brute-force reference for per-class F1. Works from the raw records with
// its own reading of the label policy so it stays independent of
// rbam::class_counts / rbam::apply_policy.
namespace rbam::testing {

struct OracleCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

OracleCounts brute_force_counts(const std::vector<PredictionRecord>& records, Relation cls,
                                LabelPolicy policy);

std::optional<double> brute_force_f1(const std::vector<PredictionRecord>& records, Relation cls,
                                     LabelPolicy policy);

}  // namespace rbam::testing
