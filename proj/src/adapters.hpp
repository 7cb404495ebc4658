#pragma once

#include <string>
#include <vector>

#include "rbam/corpus.hpp"

namespace rbam::detail {

struct NativeRecord {
  std::string id;
  std::string parent_text;
  std::string child_text;
  std::string native_label;
};

/// Reads every relation-like record of a native corpus layout, including the
/// ones that will later be dropped.
std::vector<NativeRecord> read_native(SourceFormat format, Dataset dataset,
                                      const std::string& path);

std::vector<NativeRecord> read_brat_essays(const std::string& path);
std::vector<NativeRecord> read_microtexts(const std::string& path);
std::vector<NativeRecord> read_node_xml(const std::string& path);
std::vector<NativeRecord> read_ibm_csv(const std::string& path);
std::vector<NativeRecord> read_comarg_table(const std::string& path);
std::vector<NativeRecord> read_cdcp(const std::string& path);
std::vector<NativeRecord> read_ukp_tsv(const std::string& path);
std::vector<NativeRecord> read_pair_table(const std::string& path);

}  // namespace rbam::detail
