#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rbam/corpus.hpp"
#include "rbam/records.hpp"

namespace rbam::testing {

std::string fixture(const std::string& relative);
std::string golden(const std::string& relative);
std::string config_file(const std::string& relative);
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

/// Bundled miniature corpora and their counts, known by construction.
struct FixtureCorpus {
  Dataset dataset;
  SourceFormat format;
  std::string path;  // relative to the fixtures dir
  std::size_t support;
  std::size_t attack;
  std::size_t dropped;
};

const std::vector<FixtureCorpus>& fixture_corpora();

/// Random prediction records for property tests: gold and label kinds
/// drawn uniformly, a few failures and cached entries mixed in.
std::vector<PredictionRecord> random_records(std::mt19937_64& rng, std::size_t n,
                                             const std::string& dataset = "generic");

}  // namespace rbam::testing
