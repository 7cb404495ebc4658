#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbam/relation.hpp"

namespace rbam {

enum class Dataset {
  Essays,
  Microtexts,
  NixonKennedy,
  DebatepediaProcon,
  IbmDebater,
  ComArg,
  Cdcp,
  Ukp,
  WebContent,
  Kialo,
  Generic,
};

std::string_view to_string(Dataset d);
std::optional<Dataset> parse_dataset(std::string_view name);

/// Layout of a corpus file on disk. Every dataset has a default; all of them
/// can also be fed through the interchange JSONL.
enum class SourceFormat {
  Interchange,   // JSONL {id, dataset, parent, child, gold}
  BratEssays,    // directory (or single file) of brat .ann files
  MicrotextsXml, // directory (or single file) of arggraph XML
  NodeXml,       // Debatepedia/Procon entailment-corpus XML
  IbmCsv,        // IBM claim-stance CSV
  ComArgTable,   // topic / comment / label table
  CdcpJson,      // directory of NNNNN.txt + NNNNN.ann.json
  UkpTsv,        // UKP sentential argument TSV
  PairTable,     // Arg1 / Arg2 / relation table (Nixon-Kennedy, Web-Content)
};

std::string_view to_string(SourceFormat f);
std::optional<SourceFormat> parse_source_format(std::string_view name);
SourceFormat default_format(Dataset d);

struct ArgumentPair {
  std::string id;
  std::string dataset;
  std::string parent_text;  // Arg1, the target
  std::string child_text;   // Arg2, relates to the parent
  Relation gold = Relation::Support;

  bool operator==(const ArgumentPair&) const = default;
};

struct DatasetDescriptor {
  Dataset name = Dataset::Generic;
  SourceFormat source_format = SourceFormat::Interchange;
  std::optional<std::size_t> expected_support;
  std::optional<std::size_t> expected_attack;

  static DatasetDescriptor for_dataset(Dataset d) { return {d, default_format(d), {}, {}}; }
};

struct PublishedCounts {
  std::size_t support;
  std::size_t attack;
};

/// Support/attack counts reported for the original distributions.
std::optional<PublishedCounts> published_counts(Dataset d);

struct PublishedStats {
  double avg_words;
  double avg_chars;
};

std::optional<PublishedStats> published_stats(Dataset d);

/// Bookkeeping for one load: native records = emitted + dropped.
struct LoadReport {
  std::string dataset;
  std::size_t native_records = 0;
  std::size_t emitted = 0;
  std::size_t dropped = 0;
  std::map<std::string, std::size_t> dropped_by_label;
};

/// A relation as it appears in the source corpus, before label mapping.
struct RawRelation {
  std::string id;
  std::string parent_text;
  std::string child_text;
  std::string native_label;
};

/// Loads, adapts and binarizes one corpus. Throws LoadError on unreadable
/// input, layout mismatch, duplicate ids, empty texts in the interchange
/// format, or a count mismatch against the descriptor's expected counts.
std::vector<ArgumentPair> load_dataset(const DatasetDescriptor& descriptor,
                                       const std::string& path, LoadReport* report = nullptr);

/// Maps a relation-style dataset's native label; nullopt means the record
/// is not part of the binary task.
std::optional<Relation> binary_label(Dataset dataset, std::string_view native_label);

/// Keeps the records whose label maps to Support or Attack, in order.
/// Unknown labels are dropped and tallied in `report`.
std::vector<ArgumentPair> filter_binary(std::span<const RawRelation> raw, Dataset dataset,
                                        LoadReport* report = nullptr);

/// Stance-style datasets (ComArg, UKP, IBM-Debater, Debatepedia/Procon).
/// nullopt means the record is dropped; an unrecognised label throws
/// LoadError naming it.
std::optional<Relation> normalize_stance(std::string_view native_label, Dataset dataset);

/// Parent text for a topic-anchored dataset: UKP turns `abortion` into
/// `abortion is good`; the others use the topic as is.
std::string stance_parent(Dataset dataset, std::string_view topic);

struct CorpusStats {
  std::size_t n_support = 0;
  std::size_t n_attack = 0;
  double avg_words = 0.0;
  double avg_chars = 0.0;
};

/// Averages over every argument occurrence: each pair contributes its parent
/// and its child once. Words are whitespace-separated runs; characters are
/// code points of the raw text.
CorpusStats compute_stats(std::span<const ArgumentPair> pairs);

void write_interchange(std::ostream& out, std::span<const ArgumentPair> pairs);
void write_interchange_file(const std::string& path, std::span<const ArgumentPair> pairs);

/// Parses interchange JSONL. `source` is used in error messages.
std::vector<ArgumentPair> read_interchange(std::istream& in, const std::string& source,
                                           LoadReport* report = nullptr);

}  // namespace rbam
