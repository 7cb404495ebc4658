#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "rbam/error.hpp"
#include "rbam/prompting.hpp"

using namespace rbam;
using rbam::testing::golden;
using rbam::testing::read_text;

namespace {

const ArgumentPair kAbortion{"g1", "generic", "Abortion should be legal",
                             "A baby should not come into the world unwanted", Relation::Support};

}  // namespace

TEST(Prompt, PipeTemplateGolden) {
  const auto config = load_prompt_config(golden("pipe_config.json"));
  const ArgumentPair pair{"x", "generic", "tea", "milk", Relation::Attack};
  EXPECT_EQ(build_prompt(config, pair), read_text(golden("pipe_template.txt")));
}

TEST(Prompt, DefaultConfigGolden) {
  EXPECT_EQ(build_prompt(default_prompt_config(), kAbortion),
            read_text(golden("default_abortion.txt")));
}

TEST(Prompt, ShippedConfigFileEqualsBuiltIn) {
  const auto from_file = load_prompt_config(rbam::testing::config_file("prompt_default.json"));
  EXPECT_EQ(build_prompt(from_file, kAbortion), build_prompt(default_prompt_config(), kAbortion));
  EXPECT_EQ(prompt_config_to_json(from_file), prompt_config_to_json(default_prompt_config()));
}

TEST(Prompt, JsonRoundTrip) {
  const auto c = default_prompt_config();
  const auto again = prompt_config_from_json(prompt_config_to_json(c));
  EXPECT_EQ(prompt_config_to_json(again), prompt_config_to_json(c));
}

TEST(Prompt, Deterministic) {
  const auto c = default_prompt_config();
  EXPECT_EQ(build_prompt(c, kAbortion), build_prompt(c, kAbortion));
}

TEST(Prompt, DefaultHasFourBalancedExamples) {
  const auto c = default_prompt_config();
  EXPECT_TRUE(validate_config(c).empty());
  ASSERT_EQ(c.primer.size(), 4u);
  int support = 0;
  for (const auto& e : c.primer) support += e.relation == Relation::Support;
  EXPECT_EQ(support, 2);
  // the query stops right after the relation slot
  const auto p = build_prompt(c, kAbortion);
  EXPECT_TRUE(p.ends_with("Relation:"));
}

TEST(Prompt, PairTextsAreNotReinterpreted) {
  // placeholder-looking text inside a pair must survive verbatim
  const ArgumentPair tricky{"t", "generic", "say {child}", "and {relation} too", Relation::Support};
  const auto p = build_prompt(default_prompt_config(), tricky);
  EXPECT_TRUE(p.ends_with("Arg1: say {child}\nArg2: and {relation} too\nRelation:"));
}

TEST(Prompt, DistinctPairsGiveDistinctPrompts) {
  std::mt19937_64 rng(3);
  const char* words[] = {"alpha", "beta", "gamma", "delta", "x", "y"};
  const auto c = default_prompt_config();
  std::set<std::pair<std::string, std::string>> seen_pairs;
  std::set<std::string> seen_prompts;
  for (int i = 0; i < 300; ++i) {
    std::string parent = words[rng() % 6], child = words[rng() % 6];
    if (rng() % 2) parent += std::string(" ") + words[rng() % 6];
    if (rng() % 2) child += std::string("\n") + words[rng() % 6];
    if (!seen_pairs.insert({parent, child}).second) continue;
    EXPECT_TRUE(seen_prompts.insert(build_prompt(c, {"i", "generic", parent, child, Relation::Support})).second)
        << parent << " | " << child;
  }
}

TEST(Prompt, EmptyPairTextIsConfigError) {
  EXPECT_THROW(build_prompt(default_prompt_config(), {"e", "generic", "", "x", Relation::Support}),
               ConfigError);
  EXPECT_THROW(build_prompt(default_prompt_config(), {"e", "generic", "x", "", Relation::Support}),
               ConfigError);
}

TEST(PromptValidation, ReportsEachViolation) {
  auto c = default_prompt_config();
  c.primer.pop_back();
  auto v = validate_config(c);
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v.front().find("primer size 3"), std::string::npos);
  EXPECT_THROW(build_prompt(c, kAbortion), ConfigError);

  c = default_prompt_config();
  for (auto& e : c.primer) e.relation = Relation::Support;
  v = validate_config(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.front(), "no Attack example");

  c = default_prompt_config();
  c.query_template = "Arg1: {parent}\nRelation:";
  v = validate_config(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v.front().find("{child}"), std::string::npos);

  c = default_prompt_config();
  c.query_template += " {relation}";
  EXPECT_EQ(validate_config(c).size(), 1u);

  c = default_prompt_config();
  c.attack_word = c.support_word;
  EXPECT_EQ(validate_config(c).size(), 1u);
}

TEST(PromptValidation, BadJsonIsConfigError) {
  EXPECT_THROW(prompt_config_from_json("{"), ConfigError);
  EXPECT_THROW(prompt_config_from_json(R"({"preamble": "", "example_template": "",
      "query_template": "", "primer": [{"parent": "a", "child": "b", "relation": "neutral"}]})"),
               ConfigError);
  EXPECT_THROW(load_prompt_config("/nonexistent/prompt.json"), ConfigError);
}
