#include "adapters.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rbam/delimited.hpp"
#include "rbam/error.hpp"
#include "rbam/text.hpp"

namespace rbam::detail {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

bool has_suffix(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// `path` itself if it is a file, otherwise its entries ending in `suffix`,
// sorted by name.
std::vector<fs::path> input_files(const std::string& path, std::string_view suffix) {
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) return {fs::path(path)};
  if (!fs::is_directory(path, ec)) throw LoadError("cannot open " + path);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_regular_file() && has_suffix(e.path().filename().string(), suffix))
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// File name without every extension: essay001.ann -> essay001, 00195.ann.json -> 00195.
std::string bare_stem(const fs::path& p) {
  std::string name = p.filename().string();
  return name.substr(0, name.find('.'));
}

pt::ptree read_xml_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError("cannot open " + p.string());
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw LoadError(p.string() + ": " + e.what());
  }
  return tree;
}

std::string attr(const pt::ptree& node, const std::string& name, const fs::path& file) {
  auto v = node.get_optional<std::string>("<xmlattr>." + name);
  if (!v) throw LoadError(file.string() + ": element missing attribute '" + name + "'");
  return *v;
}

}  // namespace

// brat standoff: T<n>\t<Type> <start> <end>\t<text>, R<n>\t<type> Arg1:<T> Arg2:<T>,
// A<n>\tStance <T> For|Against. Arg1 is the source (child), Arg2 the target (parent).
// Claim stances become pairs against the essay's first major claim.
std::vector<NativeRecord> read_brat_essays(const std::string& path) {
  std::vector<NativeRecord> out;
  for (const auto& file : input_files(path, ".ann")) {
    const std::string essay = bare_stem(file);
    struct Span {
      std::string type;
      std::size_t start = 0;
      std::string text;
    };
    std::map<std::string, Span> spans;
    struct Rel {
      std::string id, type, arg1, arg2;
    };
    std::vector<Rel> relations;
    std::vector<std::tuple<std::string, std::string, std::string>> stances;  // id, claim, value

    std::istringstream in(slurp(file));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto cols = text::split(line, '\t');
      auto bad = [&]() {
        return LoadError(file.string() + ":" + std::to_string(lineno) + ": malformed brat line");
      };
      if (cols.size() < 2) throw bad();
      std::istringstream body(cols[1]);
      if (line[0] == 'T') {
        if (cols.size() < 3) throw bad();
        Span s;
        if (!(body >> s.type >> s.start)) throw bad();
        s.text = cols[2];
        spans[cols[0]] = std::move(s);
      } else if (line[0] == 'R') {
        Rel r;
        r.id = cols[0];
        std::string a1, a2;
        if (!(body >> r.type >> a1 >> a2) || a1.rfind("Arg1:", 0) != 0 || a2.rfind("Arg2:", 0) != 0)
          throw bad();
        r.arg1 = a1.substr(5);
        r.arg2 = a2.substr(5);
        relations.push_back(std::move(r));
      } else if (line[0] == 'A') {
        std::string kind, target, value;
        if (!(body >> kind >> target >> value)) throw bad();
        if (kind == "Stance") stances.emplace_back(cols[0], target, value);
      }
    }

    auto text_of = [&](const std::string& id) -> const std::string& {
      auto it = spans.find(id);
      if (it == spans.end())
        throw LoadError(file.string() + ": reference to unknown span '" + id + "'");
      return it->second.text;
    };
    for (const auto& r : relations)
      out.push_back({essay + ":" + r.id, text_of(r.arg2), text_of(r.arg1), r.type});

    const Span* major = nullptr;
    for (const auto& [id, s] : spans)
      if (s.type == "MajorClaim" && (!major || s.start < major->start)) major = &s;
    for (const auto& [id, claim, value] : stances) {
      if (!major) {
        out.push_back({essay + ":" + id, "", text_of(claim), "stance-without-major-claim"});
        continue;
      }
      out.push_back({essay + ":" + id, major->text, text_of(claim), value});
    }
  }
  return out;
}

// arggraph XML: <edu id>text</edu>, <adu id type/>, <edge id src trg type/>.
// "seg" edges map EDUs onto ADUs; every other edge is a native relation.
// An undercut targets an edge; its parent is that edge's source ADU.
std::vector<NativeRecord> read_microtexts(const std::string& path) {
  std::vector<NativeRecord> out;
  for (const auto& file : input_files(path, ".xml")) {
    const auto tree = read_xml_file(file);
    const auto graph = tree.get_child_optional("arggraph");
    if (!graph) throw LoadError(file.string() + ": missing <arggraph> root");
    const std::string text_id = graph->get<std::string>("<xmlattr>.id", bare_stem(file));

    std::vector<std::pair<std::string, std::string>> edus;  // document order
    std::map<std::string, std::string> adu_text;
    struct Edge {
      std::string id, src, trg, type;
    };
    std::vector<Edge> edges;
    std::map<std::string, std::size_t> edge_index;
    for (const auto& [tag, node] : *graph) {
      if (tag == "edu") {
        edus.emplace_back(attr(node, "id", file), node.get_value<std::string>());
      } else if (tag == "adu") {
        adu_text[attr(node, "id", file)];
      } else if (tag == "edge") {
        edge_index[attr(node, "id", file)] = edges.size();
        edges.push_back({attr(node, "id", file), attr(node, "src", file), attr(node, "trg", file),
                         attr(node, "type", file)});
      }
    }
    for (const auto& [edu_id, edu_text] : edus) {
      for (const auto& e : edges) {
        if (e.type != "seg" || e.src != edu_id) continue;
        auto& t = adu_text[e.trg];
        if (!t.empty()) t += ' ';
        t += text::trim(edu_text);
      }
    }
    auto resolve = [&](const std::string& id) -> std::string {
      if (auto it = adu_text.find(id); it != adu_text.end()) return it->second;
      if (auto it = edge_index.find(id); it != edge_index.end()) {
        const auto& target_edge = edges[it->second];
        if (auto a = adu_text.find(target_edge.src); a != adu_text.end()) return a->second;
      }
      throw LoadError(file.string() + ": edge endpoint '" + id + "' is not an ADU or edge");
    };
    for (const auto& e : edges) {
      if (e.type == "seg") continue;
      out.push_back({text_id + ":" + e.id, resolve(e.trg), resolve(e.src), e.type});
    }
  }
  return out;
}

// <entailment-corpus><pair id entailment><t>child</t><h>parent</h></pair>...
std::vector<NativeRecord> read_node_xml(const std::string& path) {
  std::vector<NativeRecord> out;
  for (const auto& file : input_files(path, ".xml")) {
    const auto tree = read_xml_file(file);
    const auto root = tree.get_child_optional("entailment-corpus");
    if (!root) throw LoadError(file.string() + ": missing <entailment-corpus> root");
    const std::string stem = bare_stem(file);
    for (const auto& [tag, node] : *root) {
      if (tag != "pair") continue;
      const auto t = node.get_optional<std::string>("t");
      const auto h = node.get_optional<std::string>("h");
      if (!t || !h) throw LoadError(file.string() + ": <pair> without <t> and <h>");
      out.push_back({stem + ":" + attr(node, "id", file), *h, *t, attr(node, "entailment", file)});
    }
  }
  return out;
}

// Columns: topicText, claims.claimCorrectedText, claims.stance; ids from
// claims.claimId when present.
std::vector<NativeRecord> read_ibm_csv(const std::string& path) {
  const auto t = DelimitedTable::read_file(path);
  const auto topic = t.require_column({"topicText", "topic"});
  const auto claim = t.require_column({"claims.claimCorrectedText", "claimCorrectedText", "claim"});
  const auto stance = t.require_column({"claims.stance", "stance"});
  const auto id = t.column("claims.claimId");
  std::vector<NativeRecord> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    std::string rid = id ? t.at(r, *id) : "row" + std::to_string(t.line_of(r));
    out.push_back({"ibm:" + rid, stance_parent(Dataset::IbmDebater, t.at(r, topic)),
                   t.at(r, claim), t.at(r, stance)});
  }
  return out;
}

// Columns: topic, comment, label.
std::vector<NativeRecord> read_comarg_table(const std::string& path) {
  const auto t = DelimitedTable::read_file(path);
  const auto topic = t.require_column({"topic"});
  const auto comment = t.require_column({"comment"});
  const auto label = t.require_column({"label"});
  const auto id = t.column("id");
  std::vector<NativeRecord> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    std::string rid = id ? t.at(r, *id) : "row" + std::to_string(t.line_of(r));
    out.push_back({"comarg:" + rid, stance_parent(Dataset::ComArg, t.at(r, topic)),
                   t.at(r, comment), t.at(r, label)});
  }
  return out;
}

// <n>.txt + <n>.ann.json with prop_offsets [[start,end],...] (code points),
// reasons / evidences [[[first,last], target], ...]. The child is the text
// spanning propositions first..last, the parent the target proposition.
std::vector<NativeRecord> read_cdcp(const std::string& path) {
  std::vector<NativeRecord> out;
  for (const auto& ann : input_files(path, ".ann.json")) {
    const std::string stem = bare_stem(ann);
    const fs::path txt = ann.parent_path() / (stem + ".txt");
    const std::string body = slurp(txt);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(slurp(ann));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(ann.string() + ": " + e.what());
    }
    if (!j.contains("prop_offsets") || !j["prop_offsets"].is_array())
      throw LoadError(ann.string() + ": missing field 'prop_offsets'");
    std::vector<std::pair<std::size_t, std::size_t>> offsets;
    try {
      for (const auto& o : j["prop_offsets"])
        offsets.emplace_back(o.at(0).get<std::size_t>(), o.at(1).get<std::size_t>());
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(ann.string() + ": bad prop_offsets: " + e.what());
    }
    auto prop = [&](std::size_t i) -> const std::pair<std::size_t, std::size_t>& {
      if (i >= offsets.size())
        throw LoadError(ann.string() + ": proposition index " + std::to_string(i) + " out of range");
      return offsets[i];
    };
    for (const char* kind : {"reasons", "evidences"}) {
      if (!j.contains(kind) || j[kind].is_null()) continue;
      std::size_t n = 0;
      for (const auto& rel : j[kind]) {
        std::size_t first, last, target;
        try {
          first = rel.at(0).at(0).get<std::size_t>();
          last = rel.at(0).at(1).get<std::size_t>();
          target = rel.at(1).get<std::size_t>();
        } catch (const nlohmann::json::exception& e) {
          throw LoadError(ann.string() + ": bad " + kind + " entry: " + e.what());
        }
        const auto& p = prop(target);
        const std::string label = std::string(kind) == "reasons" ? "reason" : "evidence";
        out.push_back({stem + ":" + label + std::to_string(n++),
                       text::slice_code_points(body, p.first, p.second),
                       text::slice_code_points(body, prop(first).first, prop(last).second), label});
      }
    }
  }
  return out;
}

// Columns: topic, sentence, annotation.
std::vector<NativeRecord> read_ukp_tsv(const std::string& path) {
  std::vector<NativeRecord> out;
  for (const auto& file : input_files(path, ".tsv")) {
    const auto t = DelimitedTable::read_file(file.string());
    const auto topic = t.require_column({"topic"});
    const auto sentence = t.require_column({"sentence"});
    const auto annotation = t.require_column({"annotation"});
    const std::string stem = bare_stem(file);
    for (std::size_t r = 0; r < t.rows(); ++r)
      out.push_back({stem + ":row" + std::to_string(t.line_of(r)),
                     stance_parent(Dataset::Ukp, t.at(r, topic)), t.at(r, sentence),
                     t.at(r, annotation)});
  }
  return out;
}

// Columns: Arg1 (parent), Arg2 (child), relation; optional id.
std::vector<NativeRecord> read_pair_table(const std::string& path) {
  const auto t = DelimitedTable::read_file(path);
  const auto arg1 = t.require_column({"Arg1", "arg1", "parent"});
  const auto arg2 = t.require_column({"Arg2", "arg2", "child"});
  const auto rel = t.require_column({"relation", "Relation", "label"});
  const auto id = t.column("id");
  const std::string stem = bare_stem(path);
  std::vector<NativeRecord> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    std::string rid = id ? t.at(r, *id) : "row" + std::to_string(t.line_of(r));
    out.push_back({stem + ":" + rid, t.at(r, arg1), t.at(r, arg2), t.at(r, rel)});
  }
  return out;
}

std::vector<NativeRecord> read_native(SourceFormat format, Dataset, const std::string& path) {
  switch (format) {
    case SourceFormat::BratEssays: return read_brat_essays(path);
    case SourceFormat::MicrotextsXml: return read_microtexts(path);
    case SourceFormat::NodeXml: return read_node_xml(path);
    case SourceFormat::IbmCsv: return read_ibm_csv(path);
    case SourceFormat::ComArgTable: return read_comarg_table(path);
    case SourceFormat::CdcpJson: return read_cdcp(path);
    case SourceFormat::UkpTsv: return read_ukp_tsv(path);
    case SourceFormat::PairTable: return read_pair_table(path);
    case SourceFormat::Interchange: break;
  }
  throw std::logic_error("interchange is not a native layout");
}

}  // namespace rbam::detail
