#include "rbam/corpus.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <utility>

#include "adapters.hpp"
#include "rbam/error.hpp"
#include "rbam/text.hpp"

namespace rbam {

namespace {

struct DatasetInfo {
  Dataset id;
  std::string_view name;
  SourceFormat format;
  std::optional<PublishedCounts> counts;
  std::optional<PublishedStats> stats;
};

constexpr DatasetInfo kDatasets[] = {
    {Dataset::Essays, "essays", SourceFormat::BratEssays, PublishedCounts{4841, 497},
     PublishedStats{14.7, 87.09}},
    {Dataset::Microtexts, "microtexts", SourceFormat::MicrotextsXml, PublishedCounts{322, 121},
     PublishedStats{13.58, 81.3}},
    {Dataset::NixonKennedy, "nixon_kennedy", SourceFormat::PairTable, PublishedCounts{356, 378},
     PublishedStats{103.57, 539.21}},
    {Dataset::DebatepediaProcon, "debatepedia_procon", SourceFormat::NodeXml,
     PublishedCounts{319, 261}, PublishedStats{34.81, 215.22}},
    {Dataset::IbmDebater, "ibm_debater", SourceFormat::IbmCsv, PublishedCounts{1325, 1069},
     PublishedStats{10.78, 68.84}},
    {Dataset::ComArg, "comarg", SourceFormat::ComArgTable, PublishedCounts{640, 484},
     PublishedStats{56.81, 318.55}},
    {Dataset::Cdcp, "cdcp", SourceFormat::CdcpJson, PublishedCounts{1284, 0},
     PublishedStats{15.4, 88.11}},
    {Dataset::Ukp, "ukp", SourceFormat::UkpTsv, PublishedCounts{4944, 6195},
     PublishedStats{15.33, 83.64}},
    {Dataset::WebContent, "web_content", SourceFormat::PairTable, PublishedCounts{1348, 1316},
     PublishedStats{19.87, 112.94}},
    {Dataset::Kialo, "kialo", SourceFormat::Interchange, PublishedCounts{68549, 65355},
     PublishedStats{21.84, 135.69}},
    {Dataset::Generic, "generic", SourceFormat::Interchange, std::nullopt, std::nullopt},
};

constexpr std::pair<SourceFormat, std::string_view> kFormats[] = {
    {SourceFormat::Interchange, "interchange"},      {SourceFormat::BratEssays, "brat_essays"},
    {SourceFormat::MicrotextsXml, "microtexts_xml"}, {SourceFormat::NodeXml, "node_xml"},
    {SourceFormat::IbmCsv, "ibm_csv"},               {SourceFormat::ComArgTable, "comarg_table"},
    {SourceFormat::CdcpJson, "cdcp_json"},           {SourceFormat::UkpTsv, "ukp_tsv"},
    {SourceFormat::PairTable, "pair_table"},
};

const DatasetInfo& info(Dataset d) {
  for (const auto& i : kDatasets)
    if (i.id == d) return i;
  throw std::logic_error("unknown dataset enumerator");
}

bool is_stance_dataset(Dataset d) {
  return d == Dataset::ComArg || d == Dataset::Ukp || d == Dataset::IbmDebater ||
         d == Dataset::DebatepediaProcon;
}

void note_dropped(LoadReport* report, const std::string& label) {
  if (!report) return;
  ++report->dropped;
  ++report->dropped_by_label[label];
}

}  // namespace

std::string_view to_string(Dataset d) { return info(d).name; }

std::optional<Dataset> parse_dataset(std::string_view name) {
  for (const auto& i : kDatasets)
    if (i.name == name) return i.id;
  return std::nullopt;
}

std::string_view to_string(SourceFormat f) {
  for (const auto& [fmt, name] : kFormats)
    if (fmt == f) return name;
  throw std::logic_error("unknown format enumerator");
}

std::optional<SourceFormat> parse_source_format(std::string_view name) {
  for (const auto& [fmt, n] : kFormats)
    if (n == name) return fmt;
  return std::nullopt;
}

SourceFormat default_format(Dataset d) { return info(d).format; }

std::optional<PublishedCounts> published_counts(Dataset d) { return info(d).counts; }

std::optional<PublishedStats> published_stats(Dataset d) { return info(d).stats; }

std::optional<Relation> binary_label(Dataset dataset, std::string_view native_label) {
  const std::string l = text::ascii_lower(text::trim(native_label));
  switch (dataset) {
    case Dataset::Essays:
      // brat relation types plus claim stances toward the major claim
      if (l == "supports" || l == "for") return Relation::Support;
      if (l == "attacks" || l == "against") return Relation::Attack;
      return std::nullopt;
    case Dataset::Microtexts:
      if (l == "sup" || l == "exa") return Relation::Support;
      if (l == "reb" || l == "und") return Relation::Attack;
      return std::nullopt;
    case Dataset::Cdcp:
      if (l == "reason" || l == "evidence") return Relation::Support;
      return std::nullopt;
    case Dataset::DebatepediaProcon:
    case Dataset::IbmDebater:
    case Dataset::ComArg:
    case Dataset::Ukp:
      try {
        return normalize_stance(native_label, dataset);
      } catch (const LoadError&) {
        return std::nullopt;
      }
    case Dataset::NixonKennedy:
    case Dataset::WebContent:
    case Dataset::Kialo:
    case Dataset::Generic:
      if (l == "support" || l == "supports" || l == "pro") return Relation::Support;
      if (l == "attack" || l == "attacks" || l == "con") return Relation::Attack;
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Relation> normalize_stance(std::string_view native_label, Dataset dataset) {
  const std::string raw = text::trim(native_label);
  const std::string l = text::ascii_lower(raw);
  auto unknown = [&]() -> LoadError {
    return LoadError("unknown " + std::string(to_string(dataset)) + " label '" + raw + "'");
  };
  switch (dataset) {
    case Dataset::ComArg:
      // Five-point scale; the two attack and the two support grades are kept.
      if (raw == "A" || raw == "a" || raw == "1" || raw == "2") return Relation::Attack;
      if (raw == "S" || raw == "s" || raw == "5" || raw == "4") return Relation::Support;
      if (raw == "N" || raw == "3") return std::nullopt;
      if (l == "explicit attack" || l == "vague attack" || l == "implicit attack" ||
          l == "vague/implicit attack")
        return Relation::Attack;
      if (l == "explicit support" || l == "vague support" || l == "implicit support" ||
          l == "vague/implicit support")
        return Relation::Support;
      if (l == "no relation" || l == "neutral" || l == "none" || l == "no use")
        return std::nullopt;
      throw unknown();
    case Dataset::Ukp:
      if (l == "argument_for") return Relation::Support;
      if (l == "argument_against") return Relation::Attack;
      if (l == "noargument") return std::nullopt;
      throw unknown();
    case Dataset::IbmDebater:
      if (l == "pro") return Relation::Support;
      if (l == "con") return Relation::Attack;
      throw unknown();
    case Dataset::DebatepediaProcon:
      if (l == "yes") return Relation::Support;
      if (l == "no") return Relation::Attack;
      if (l == "unknown") return std::nullopt;
      throw unknown();
    default:
      throw LoadError("dataset " + std::string(to_string(dataset)) + " is not stance-annotated");
  }
}

std::string stance_parent(Dataset dataset, std::string_view topic) {
  std::string t = text::trim(topic);
  if (dataset == Dataset::Ukp) return t + " is good";
  return t;
}

std::vector<ArgumentPair> filter_binary(std::span<const RawRelation> raw, Dataset dataset,
                                        LoadReport* report) {
  std::vector<ArgumentPair> out;
  for (const auto& r : raw) {
    if (report) ++report->native_records;
    const auto rel = binary_label(dataset, r.native_label);
    if (!rel) {
      note_dropped(report, text::ascii_lower(text::trim(r.native_label)));
      continue;
    }
    out.push_back({r.id, std::string(to_string(dataset)), r.parent_text, r.child_text, *rel});
    if (report) ++report->emitted;
  }
  return out;
}

CorpusStats compute_stats(std::span<const ArgumentPair> pairs) {
  CorpusStats s;
  std::size_t words = 0, chars = 0;
  for (const auto& p : pairs) {
    (p.gold == Relation::Support ? s.n_support : s.n_attack)++;
    words += text::word_count(p.parent_text) + text::word_count(p.child_text);
    chars += text::char_count(p.parent_text) + text::char_count(p.child_text);
  }
  if (!pairs.empty()) {
    const double texts = 2.0 * static_cast<double>(pairs.size());
    s.avg_words = static_cast<double>(words) / texts;
    s.avg_chars = static_cast<double>(chars) / texts;
  }
  return s;
}

void write_interchange(std::ostream& out, std::span<const ArgumentPair> pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["dataset"] = p.dataset;
    j["parent"] = p.parent_text;
    j["child"] = p.child_text;
    j["gold"] = std::string(to_string(p.gold));
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

void write_interchange_file(const std::string& path, std::span<const ArgumentPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_interchange(out, pairs);
}

std::vector<ArgumentPair> read_interchange(std::istream& in, const std::string& source,
                                           LoadReport* report) {
  std::vector<ArgumentPair> out;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    return LoadError(source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw fail("record is not an object");
    auto field = [&](const char* key) -> std::string {
      if (!j.contains(key) || !j[key].is_string()) throw fail(std::string("missing field '") + key + "'");
      return j[key].get<std::string>();
    };
    ArgumentPair p;
    p.id = field("id");
    p.dataset = j.contains("dataset") && j["dataset"].is_string() ? j["dataset"].get<std::string>()
                                                                   : std::string("generic");
    p.parent_text = field("parent");
    p.child_text = field("child");
    const std::string gold = field("gold");
    const auto rel = parse_relation(gold);
    if (!rel) throw fail("gold '" + gold + "' is not support/attack");
    p.gold = *rel;
    if (text::trim(p.parent_text).empty() || text::trim(p.child_text).empty())
      throw fail("empty argument text in record '" + p.id + "'");
    if (report) {
      ++report->native_records;
      ++report->emitted;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ArgumentPair> load_dataset(const DatasetDescriptor& descriptor,
                                       const std::string& path, LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = LoadReport{};
  rep.dataset = std::string(to_string(descriptor.name));

  std::vector<ArgumentPair> pairs;
  if (descriptor.source_format == SourceFormat::Interchange) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open " + path);
    pairs = read_interchange(in, path, &rep);
    if (descriptor.name != Dataset::Generic) {
      for (const auto& p : pairs)
        if (p.dataset != rep.dataset)
          throw LoadError(path + ": record '" + p.id + "' belongs to dataset '" + p.dataset +
                          "', expected '" + rep.dataset + "'");
    }
  } else {
    const auto native = detail::read_native(descriptor.source_format, descriptor.name, path);
    const bool stance = is_stance_dataset(descriptor.name);
    for (const auto& r : native) {
      ++rep.native_records;
      const std::optional<Relation> rel = stance ? normalize_stance(r.native_label, descriptor.name)
                                                 : binary_label(descriptor.name, r.native_label);
      if (!rel) {
        note_dropped(&rep, text::ascii_lower(text::trim(r.native_label)));
        continue;
      }
      ArgumentPair p{r.id, rep.dataset, text::trim(r.parent_text), text::trim(r.child_text), *rel};
      if (p.parent_text.empty() || p.child_text.empty()) {
        note_dropped(&rep, "<empty text>");
        continue;
      }
      pairs.push_back(std::move(p));
      ++rep.emitted;
    }
  }

  std::set<std::string_view> seen;
  for (const auto& p : pairs)
    if (!seen.insert(p.id).second) throw LoadError(path + ": duplicate id '" + p.id + "'");

  const auto stats = compute_stats(pairs);
  auto check = [&](const std::optional<std::size_t>& expected, std::size_t actual,
                   std::string_view what) {
    if (expected && *expected != actual)
      throw LoadError(path + ": expected " + std::to_string(*expected) + " " + std::string(what) +
                      " pairs for " + rep.dataset + ", loaded " + std::to_string(actual));
  };
  check(descriptor.expected_support, stats.n_support, "support");
  check(descriptor.expected_attack, stats.n_attack, "attack");
  return pairs;
}

}  // namespace rbam
