#pragma once

#include <array>
#include <string>
#include <vector>

#include "rbam/corpus.hpp"
#include "rbam/relation.hpp"

namespace rbam {

struct PrimerExample {
  std::string parent;
  std::string child;
  Relation relation = Relation::Support;
};

/// Few-shot primer plus the templates that turn a pair into one completion
/// string. Templates use {parent}, {child} and (examples only) {relation}.
struct PromptConfig {
  std::string preamble;
  std::string example_template;
  std::string query_template;
  std::vector<PrimerExample> primer;
  std::string support_word = "support";
  std::string attack_word = "attack";

  const std::string& word(Relation r) const {
    return r == Relation::Support ? support_word : attack_word;
  }
};

/// The shipped default: a one-line instruction, four neutral-topic examples
/// (two support, two attack) in "Arg1/Arg2/Relation" shape, and a query that
/// stops right after "Relation:".
PromptConfig default_prompt_config();

/// Every invariant violation, empty when the config is usable.
std::vector<std::string> validate_config(const PromptConfig& config);

/// preamble + rendered primer examples in order + rendered query.
/// Throws ConfigError on an invalid config or an empty pair text.
std::string build_prompt(const PromptConfig& config, const ArgumentPair& pair);

PromptConfig prompt_config_from_json(const std::string& json_text);
PromptConfig load_prompt_config(const std::string& path);
std::string prompt_config_to_json(const PromptConfig& config);

}  // namespace rbam
