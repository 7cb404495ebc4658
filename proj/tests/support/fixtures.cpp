#include "fixtures.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rbam::testing {

namespace fs = std::filesystem;

std::string fixture(const std::string& relative) { return std::string(RBAM_FIXTURES) + "/" + relative; }
std::string golden(const std::string& relative) { return std::string(RBAM_GOLDEN) + "/" + relative; }
std::string config_file(const std::string& relative) {
  return std::string(RBAM_CONFIG) + "/" + relative;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = fs::temp_directory_path() /
          ("rbam-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

const std::vector<FixtureCorpus>& fixture_corpora() {
  static const std::vector<FixtureCorpus> corpora = {
      {Dataset::Essays, SourceFormat::BratEssays, "essays", 4, 2, 1},
      {Dataset::Microtexts, SourceFormat::MicrotextsXml, "microtexts", 1, 2, 1},
      {Dataset::NixonKennedy, SourceFormat::PairTable, "nixon_kennedy/nk_sample.tsv", 2, 1, 1},
      {Dataset::DebatepediaProcon, SourceFormat::NodeXml, "debatepedia/node_sample.xml", 2, 1, 1},
      {Dataset::IbmDebater, SourceFormat::IbmCsv, "ibm/claim_stance_sample.csv", 3, 2, 0},
      {Dataset::ComArg, SourceFormat::ComArgTable, "comarg/comarg_sample.csv", 3, 2, 1},
      {Dataset::Cdcp, SourceFormat::CdcpJson, "cdcp", 3, 0, 0},
      {Dataset::Ukp, SourceFormat::UkpTsv, "ukp/abortion.tsv", 2, 2, 1},
      {Dataset::WebContent, SourceFormat::PairTable, "web_content/web_sample.csv", 2, 2, 0},
      {Dataset::Kialo, SourceFormat::Interchange, "kialo/kialo_sample.jsonl", 2, 2, 0},
  };
  return corpora;
}

std::vector<PredictionRecord> random_records(std::mt19937_64& rng, std::size_t n,
                                             const std::string& dataset) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_real_distribution<double> latency(0.0, 2.0);
  static const char* extras[] = {"compare", "paraphrase", "rebuttal", "contrast"};
  std::vector<PredictionRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    PredictionRecord r;
    r.id = "r" + std::to_string(i);
    r.dataset = dataset;
    r.parent = "p" + std::to_string(i);
    r.child = "c" + std::to_string(i);
    r.gold = coin(rng) ? Relation::Support : Relation::Attack;
    const int k = kind(rng);
    if (k < 4) {
      r.label.kind = LabelKind::Support;
      r.raw_text = "support";
    } else if (k < 8) {
      r.label.kind = LabelKind::Attack;
      r.raw_text = "attack";
    } else if (k == 8) {
      r.label.kind = LabelKind::Other;
      r.label.other_text = extras[i % 4];
      r.raw_text = r.label.other_text;
    } else {
      r.label.kind = LabelKind::Unparseable;
      r.raw_text = "?!";
    }
    if (i % 17 == 5) {  // failed calls carry no output
      r.error = "injected failure";
      r.raw_text.clear();
      r.label = {};
    }
    r.latency_seconds = latency(rng);
    r.cached = (i % 11 == 3);
    r.backend_id = "test";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rbam::testing
