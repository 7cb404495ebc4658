#include "rbam/prompting.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string_view>

#include "rbam/error.hpp"
#include "rbam/text.hpp"

namespace rbam {

namespace {

constexpr std::string_view kParent = "{parent}";
constexpr std::string_view kChild = "{child}";
constexpr std::string_view kRelation = "{relation}";

// Single left-to-right pass, so placeholder-like text inside a value is
// never expanded again.
std::string render(std::string_view tmpl, std::string_view parent, std::string_view child,
                   std::string_view relation) {
  std::string out;
  out.reserve(tmpl.size() + parent.size() + child.size());
  for (std::size_t i = 0; i < tmpl.size();) {
    const auto rest = tmpl.substr(i);
    if (rest.starts_with(kParent)) {
      out += parent;
      i += kParent.size();
    } else if (rest.starts_with(kChild)) {
      out += child;
      i += kChild.size();
    } else if (rest.starts_with(kRelation)) {
      out += relation;
      i += kRelation.size();
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

bool contains(std::string_view s, std::string_view needle) {
  return s.find(needle) != std::string_view::npos;
}

}  // namespace

PromptConfig default_prompt_config() {
  PromptConfig c;
  c.preamble =
      "Decide whether Arg2 supports or attacks Arg1. "
      "Answer with a single word: support or attack.\n\n";
  c.example_template = "Arg1: {parent}\nArg2: {child}\nRelation: {relation}\n\n";
  c.query_template = "Arg1: {parent}\nArg2: {child}\nRelation:";
  c.primer = {
      {"Public libraries should open on Sundays.",
       "Many people can only visit a library when they are not at work.", Relation::Support},
      {"Cities should plant more trees along their streets.",
       "Tree roots crack pavements and damage underground pipes.", Relation::Attack},
      {"Learning a second language is worthwhile.",
       "Bilingual speakers can communicate with far more people.", Relation::Support},
      {"Homework should be banned in primary schools.",
       "Regular practice at home helps children remember what they learned in class.",
       Relation::Attack},
  };
  return c;
}

std::vector<std::string> validate_config(const PromptConfig& config) {
  std::vector<std::string> v;
  if (config.primer.size() != 4)
    v.push_back("primer size " + std::to_string(config.primer.size()) + " ≠ 4");
  bool has_support = false, has_attack = false;
  for (std::size_t i = 0; i < config.primer.size(); ++i) {
    const auto& ex = config.primer[i];
    (ex.relation == Relation::Support ? has_support : has_attack) = true;
    if (text::trim(ex.parent).empty() || text::trim(ex.child).empty())
      v.push_back("primer example " + std::to_string(i + 1) + " has empty text");
  }
  if (!has_support) v.push_back("no Support example");
  if (!has_attack) v.push_back("no Attack example");
  for (auto ph : {kParent, kChild, kRelation})
    if (!contains(config.example_template, ph))
      v.push_back("example_template missing " + std::string(ph));
  for (auto ph : {kParent, kChild})
    if (!contains(config.query_template, ph))
      v.push_back("query_template missing " + std::string(ph));
  if (contains(config.query_template, kRelation))
    v.push_back("query_template must not contain {relation}");
  if (text::trim(config.support_word).empty() || text::trim(config.attack_word).empty())
    v.push_back("relation words must be non-empty");
  else if (config.support_word == config.attack_word)
    v.push_back("relation words must differ");
  return v;
}

std::string build_prompt(const PromptConfig& config, const ArgumentPair& pair) {
  if (const auto v = validate_config(config); !v.empty())
    throw ConfigError("invalid prompt config: " + v.front());
  if (text::trim(pair.parent_text).empty() || text::trim(pair.child_text).empty())
    throw ConfigError("pair '" + pair.id + "' has an empty argument text");
  std::string out = config.preamble;
  for (const auto& ex : config.primer)
    out += render(config.example_template, ex.parent, ex.child, config.word(ex.relation));
  out += render(config.query_template, pair.parent_text, pair.child_text, "");
  return out;
}

PromptConfig prompt_config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("prompt config: ") + e.what());
  }
  PromptConfig c;
  try {
    c.preamble = j.value("preamble", "");
    c.example_template = j.at("example_template").get<std::string>();
    c.query_template = j.at("query_template").get<std::string>();
    for (const auto& e : j.at("primer")) {
      const auto rel_name = e.at("relation").get<std::string>();
      const auto rel = parse_relation(rel_name);
      if (!rel) throw ConfigError("prompt config: primer relation '" + rel_name + "'");
      c.primer.push_back({e.at("parent").get<std::string>(), e.at("child").get<std::string>(), *rel});
    }
    if (j.contains("relation_words")) {
      const auto& w = j["relation_words"];
      c.support_word = w.value("support", c.support_word);
      c.attack_word = w.value("attack", c.attack_word);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("prompt config: ") + e.what());
  }
  return c;
}

PromptConfig load_prompt_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open prompt config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return prompt_config_from_json(ss.str());
}

std::string prompt_config_to_json(const PromptConfig& config) {
  nlohmann::ordered_json j;
  j["preamble"] = config.preamble;
  j["example_template"] = config.example_template;
  j["query_template"] = config.query_template;
  j["primer"] = nlohmann::ordered_json::array();
  for (const auto& ex : config.primer) {
    nlohmann::ordered_json e;
    e["parent"] = ex.parent;
    e["child"] = ex.child;
    e["relation"] = std::string(to_string(ex.relation));
    j["primer"].push_back(e);
  }
  j["relation_words"] = {{"support", config.support_word}, {"attack", config.attack_word}};
  return j.dump(2) + "\n";
}

}  // namespace rbam
