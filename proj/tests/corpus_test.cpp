#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "rbam/corpus.hpp"
#include "rbam/error.hpp"

using namespace rbam;
using rbam::testing::fixture;

namespace {

std::size_t count(const std::vector<ArgumentPair>& pairs, Relation r) {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.gold == r;
  return n;
}

}  // namespace

TEST(Corpus, DatasetNamesRoundTrip) {
  for (auto d : {Dataset::Essays, Dataset::Microtexts, Dataset::NixonKennedy,
                 Dataset::DebatepediaProcon, Dataset::IbmDebater, Dataset::ComArg, Dataset::Cdcp,
                 Dataset::Ukp, Dataset::WebContent, Dataset::Kialo, Dataset::Generic}) {
    EXPECT_EQ(parse_dataset(to_string(d)), d);
    EXPECT_EQ(parse_source_format(to_string(default_format(d))), default_format(d));
  }
  EXPECT_FALSE(parse_dataset("aifdb"));
}

TEST(Corpus, PublishedCountsTable) {
  EXPECT_EQ(published_counts(Dataset::Essays)->support, 4841u);
  EXPECT_EQ(published_counts(Dataset::Essays)->attack, 497u);
  EXPECT_EQ(published_counts(Dataset::Cdcp)->attack, 0u);
  EXPECT_EQ(published_counts(Dataset::Kialo)->support, 68549u);
  EXPECT_EQ(published_counts(Dataset::Kialo)->attack, 65355u);
  EXPECT_EQ(published_counts(Dataset::WebContent)->support, 1348u);
  EXPECT_FALSE(published_counts(Dataset::Generic));
  std::size_t total = 0;
  for (const auto& f : rbam::testing::fixture_corpora()) {
    const auto c = published_counts(f.dataset);
    total += c->support + c->attack;
  }
  EXPECT_EQ(total, 159604u);  // total pairs assessed per model
}

TEST(Corpus, EmptyInterchangeFileLoadsNothing) {
  const auto pairs = load_dataset(DatasetDescriptor::for_dataset(Dataset::Generic),
                                  fixture("interchange/empty.jsonl"));
  EXPECT_TRUE(pairs.empty());
}

TEST(Corpus, InterchangeFixtureTwoSupportOneAttack) {
  LoadReport report;
  const auto pairs = load_dataset(DatasetDescriptor::for_dataset(Dataset::Generic),
                                  fixture("interchange/three.jsonl"), &report);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].gold, Relation::Support);
  EXPECT_EQ(pairs[1].gold, Relation::Attack);
  EXPECT_EQ(pairs[2].gold, Relation::Support);
  EXPECT_EQ(pairs[0].parent_text, "Abortion should be legal");
  EXPECT_EQ(report.native_records, 3u);
  EXPECT_EQ(report.emitted, 3u);
}

TEST(Corpus, InterchangeErrors) {
  const auto d = DatasetDescriptor::for_dataset(Dataset::Generic);
  EXPECT_THROW(load_dataset(d, fixture("interchange/duplicate_ids.jsonl")), LoadError);
  EXPECT_THROW(load_dataset(d, fixture("interchange/bad_gold.jsonl")), LoadError);
  EXPECT_THROW(load_dataset(d, fixture("interchange/empty_text.jsonl")), LoadError);
  EXPECT_THROW(load_dataset(d, fixture("interchange/does_not_exist.jsonl")), LoadError);
  // records tagged with another dataset cannot be loaded as kialo
  EXPECT_THROW(load_dataset(DatasetDescriptor::for_dataset(Dataset::Kialo),
                            fixture("interchange/three.jsonl")),
               LoadError);
  std::istringstream missing_field("{\"id\":\"a\",\"parent\":\"x\",\"gold\":\"support\"}\n");
  try {
    read_interchange(missing_field, "mem");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("mem:1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("child"), std::string::npos);
  }
}

TEST(Corpus, ExpectedCountMismatchIsAnError) {
  auto d = DatasetDescriptor::for_dataset(Dataset::Generic);
  d.expected_support = 2;
  d.expected_attack = 1;
  EXPECT_NO_THROW(load_dataset(d, fixture("interchange/three.jsonl")));
  d.expected_attack = 2;
  EXPECT_THROW(load_dataset(d, fixture("interchange/three.jsonl")), LoadError);
}

TEST(Corpus, EveryFixtureAdapterYieldsKnownCounts) {
  for (const auto& f : rbam::testing::fixture_corpora()) {
    SCOPED_TRACE(std::string(to_string(f.dataset)));
    DatasetDescriptor d{f.dataset, f.format, f.support, f.attack};
    LoadReport report;
    const auto pairs = load_dataset(d, fixture(f.path), &report);
    EXPECT_EQ(count(pairs, Relation::Support), f.support);
    EXPECT_EQ(count(pairs, Relation::Attack), f.attack);
    EXPECT_EQ(report.dropped, f.dropped);
    EXPECT_EQ(report.emitted + report.dropped, report.native_records);
    EXPECT_EQ(report.emitted, pairs.size());
    for (const auto& p : pairs) {
      EXPECT_EQ(p.dataset, to_string(f.dataset));
      EXPECT_FALSE(p.parent_text.empty());
      EXPECT_FALSE(p.child_text.empty());
    }
  }
}

TEST(Corpus, InterchangeReloadIsIdempotentForEveryAdapter) {
  rbam::testing::TempDir tmp;
  for (const auto& f : rbam::testing::fixture_corpora()) {
    SCOPED_TRACE(std::string(to_string(f.dataset)));
    const auto pairs = load_dataset({f.dataset, f.format, {}, {}}, fixture(f.path));
    const auto out = tmp.file(std::string(to_string(f.dataset)) + ".jsonl");
    write_interchange_file(out, pairs);
    const auto again = load_dataset({f.dataset, SourceFormat::Interchange, {}, {}}, out);
    EXPECT_EQ(again, pairs);
    write_interchange_file(out, again);
    EXPECT_EQ(load_dataset({f.dataset, SourceFormat::Interchange, {}, {}}, out), pairs);
  }
}

TEST(Corpus, EssaysRelationsAndClaimStances) {
  const auto pairs = load_dataset(DatasetDescriptor::for_dataset(Dataset::Essays), fixture("essays"));
  ASSERT_EQ(pairs.size(), 6u);
  // R1: premise T3 supports claim T2; Arg1 is the child
  EXPECT_EQ(pairs[0].id, "essay001:R1");
  EXPECT_EQ(pairs[0].parent_text, "cooperation teaches children how to live in a community");
  EXPECT_EQ(pairs[0].child_text, "group projects force pupils to share tasks and listen to each other");
  // claim stance against the first major claim, not the restated one
  const auto it = std::find_if(pairs.begin(), pairs.end(),
                               [](const ArgumentPair& p) { return p.id == "essay001:A2"; });
  ASSERT_NE(it, pairs.end());
  EXPECT_EQ(it->gold, Relation::Attack);
  EXPECT_EQ(it->parent_text, "schools should put more weight on cooperation than on competition");
}

TEST(Corpus, MicrotextsUndercutTargetsAttackedEdgeSource) {
  const auto pairs =
      load_dataset(DatasetDescriptor::for_dataset(Dataset::Microtexts), fixture("microtexts"));
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].id, "micro_t001:c1");
  EXPECT_EQ(pairs[0].gold, Relation::Attack);
  // multi-EDU ADU text is joined in document order
  EXPECT_EQ(pairs[0].parent_text,
            "The city should keep its night buses, even if timetables are thinned out.");
  EXPECT_EQ(pairs[2].id, "micro_t001:c3");
  EXPECT_EQ(pairs[2].gold, Relation::Attack);
  EXPECT_EQ(pairs[2].parent_text, "Running night buses is expensive for the city.");
  EXPECT_EQ(pairs[2].child_text, "But the costs are small compared to the road budget.");
}

TEST(Corpus, NodeXmlChildIsT) {
  const auto pairs = load_dataset(DatasetDescriptor::for_dataset(Dataset::DebatepediaProcon),
                                  fixture("debatepedia/node_sample.xml"));
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[1].parent_text, "Schools should require uniforms.");
  EXPECT_EQ(pairs[1].child_text, "Uniforms suppress the way students express themselves.");
  EXPECT_EQ(pairs[1].gold, Relation::Attack);
}

TEST(Corpus, IbmParentIsTopic) {
  const auto pairs = load_dataset(DatasetDescriptor::for_dataset(Dataset::IbmDebater),
                                  fixture("ibm/claim_stance_sample.csv"));
  ASSERT_EQ(pairs.size(), 5u);
  EXPECT_EQ(pairs[0].parent_text, "This house would ban boxing");
  EXPECT_EQ(pairs[0].child_text, "Boxing causes lasting brain damage, even in amateurs");
  EXPECT_EQ(pairs[2].child_text, "Spectators are drawn to \"violence\" as entertainment");
  EXPECT_EQ(pairs[0].id, "ibm:101");
}

TEST(Corpus, CdcpAllSupportWithCodePointOffsets) {
  const auto pairs = load_dataset(DatasetDescriptor::for_dataset(Dataset::Cdcp), fixture("cdcp"));
  ASSERT_EQ(pairs.size(), 3u);
  for (const auto& p : pairs) EXPECT_EQ(p.gold, Relation::Support);
  EXPECT_EQ(pairs[0].child_text, "The caf\xC3\xA9 owner called me four times a day.");
  EXPECT_EQ(pairs[0].parent_text, "Collectors should not call more than once a week.");
  EXPECT_EQ(pairs[1].child_text,
            "Repeated calls are a form of harassment. My neighbour lost her job over these calls.");
  EXPECT_EQ(pairs[2].id, "00001:evidence0");
}

TEST(Corpus, UkpParentIsTopicIsGood) {
  const auto pairs =
      load_dataset(DatasetDescriptor::for_dataset(Dataset::Ukp), fixture("ukp/abortion.tsv"));
  ASSERT_EQ(pairs.size(), 4u);
  for (const auto& p : pairs) EXPECT_EQ(p.parent_text, "abortion is good");
  EXPECT_EQ(pairs[0].gold, Relation::Support);
  EXPECT_EQ(pairs[1].gold, Relation::Attack);
}

TEST(Corpus, MissingColumnIsSchemaError) {
  rbam::testing::TempDir tmp;
  const auto path = tmp.file("bad.csv");
  rbam::testing::write_text(path, "Arg1,Arg2\nx,y\n");
  try {
    load_dataset(DatasetDescriptor::for_dataset(Dataset::WebContent), path);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("relation"), std::string::npos);
  }
}

TEST(Corpus, UnknownStanceLabelIsLoadErrorNamingIt) {
  rbam::testing::TempDir tmp;
  const auto path = tmp.file("comarg.csv");
  rbam::testing::write_text(path, "topic,comment,label\nt,c,sarcasm\n");
  try {
    load_dataset(DatasetDescriptor::for_dataset(Dataset::ComArg), path);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("sarcasm"), std::string::npos);
  }
}

TEST(Corpus, DuplicateNativeIdsRejected) {
  rbam::testing::TempDir tmp;
  const auto path = tmp.file("web.csv");
  rbam::testing::write_text(path, "id,Arg1,Arg2,relation\nx,a,b,support\nx,c,d,attack\n");
  EXPECT_THROW(load_dataset(DatasetDescriptor::for_dataset(Dataset::WebContent), path), LoadError);
}

TEST(NormalizeStance, ComArgGrades) {
  EXPECT_EQ(normalize_stance("explicit attack", Dataset::ComArg), Relation::Attack);
  EXPECT_EQ(normalize_stance("vague/implicit attack", Dataset::ComArg), Relation::Attack);
  EXPECT_EQ(normalize_stance("explicit support", Dataset::ComArg), Relation::Support);
  EXPECT_EQ(normalize_stance("vague/implicit support", Dataset::ComArg), Relation::Support);
  EXPECT_EQ(normalize_stance("A", Dataset::ComArg), Relation::Attack);
  EXPECT_EQ(normalize_stance("s", Dataset::ComArg), Relation::Support);
  EXPECT_EQ(normalize_stance("N", Dataset::ComArg), std::nullopt);
  EXPECT_EQ(normalize_stance("3", Dataset::ComArg), std::nullopt);
  EXPECT_EQ(normalize_stance("no relation", Dataset::ComArg), std::nullopt);
  EXPECT_THROW(normalize_stance("maybe", Dataset::ComArg), LoadError);
}

TEST(NormalizeStance, UkpIbmDebatepedia) {
  EXPECT_EQ(normalize_stance("Argument_for", Dataset::Ukp), Relation::Support);
  EXPECT_EQ(normalize_stance("Argument_against", Dataset::Ukp), Relation::Attack);
  EXPECT_EQ(normalize_stance("NoArgument", Dataset::Ukp), std::nullopt);
  EXPECT_EQ(normalize_stance("PRO", Dataset::IbmDebater), Relation::Support);
  EXPECT_EQ(normalize_stance("CON", Dataset::IbmDebater), Relation::Attack);
  EXPECT_EQ(normalize_stance("YES", Dataset::DebatepediaProcon), Relation::Support);
  EXPECT_EQ(normalize_stance("NO", Dataset::DebatepediaProcon), Relation::Attack);
  EXPECT_THROW(normalize_stance("Argument_maybe", Dataset::Ukp), LoadError);
  EXPECT_THROW(normalize_stance("support", Dataset::Essays), LoadError);
  EXPECT_EQ(stance_parent(Dataset::Ukp, "abortion"), "abortion is good");
  EXPECT_EQ(stance_parent(Dataset::ComArg, " Gay marriage "), "Gay marriage");
}

TEST(FilterBinary, KeepsSupportAndAttackInOrder) {
  const std::vector<RawRelation> raw = {
      {"1", "p1", "c1", "support"}, {"2", "p2", "c2", "attack"}, {"3", "p3", "c3", "rephrase"}};
  LoadReport report;
  const auto out = filter_binary(raw, Dataset::Generic, &report);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].id, "1");
  EXPECT_EQ(out[1].gold, Relation::Attack);
  EXPECT_EQ(report.dropped, 1u);
  EXPECT_EQ(report.dropped_by_label.at("rephrase"), 1u);
  EXPECT_TRUE(filter_binary({}, Dataset::Generic).empty());
}

TEST(FilterBinary, CdcpNativeRelationsAreAllSupport) {
  const std::vector<RawRelation> raw = {{"1", "p", "c", "reason"},
                                        {"2", "p", "c", "evidence"},
                                        {"3", "p", "c", "reason"}};
  const auto out = filter_binary(raw, Dataset::Cdcp);
  ASSERT_EQ(out.size(), 3u);
  for (const auto& p : out) EXPECT_EQ(p.gold, Relation::Support);
}

TEST(FilterBinary, DroppedPlusEmittedEqualsNative) {
  std::mt19937_64 rng(11);
  const char* labels[] = {"support", "attack", "no relation", "rephrase", "Support", "unrelated"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RawRelation> raw;
    const auto n = rng() % 40;
    for (std::size_t i = 0; i < n; ++i)
      raw.push_back({std::to_string(i), "p", "c", labels[rng() % 6]});
    LoadReport report;
    const auto out = filter_binary(raw, Dataset::NixonKennedy, &report);
    EXPECT_EQ(report.native_records, raw.size());
    EXPECT_EQ(report.emitted + report.dropped, raw.size());
    EXPECT_EQ(out.size(), report.emitted);
  }
}

TEST(ComputeStats, SinglePairArithmetic) {
  const std::vector<ArgumentPair> pairs = {{"1", "generic", "a b", "c", Relation::Support}};
  const auto s = compute_stats(pairs);
  EXPECT_DOUBLE_EQ(s.avg_words, 1.5);
  EXPECT_DOUBLE_EQ(s.avg_chars, 2.0);
  EXPECT_EQ(s.n_support, 1u);
  EXPECT_EQ(s.n_attack, 0u);
}

TEST(ComputeStats, EmptyIsZeroed) {
  const auto s = compute_stats({});
  EXPECT_EQ(s.n_support + s.n_attack, 0u);
  EXPECT_EQ(s.avg_words, 0.0);
  EXPECT_EQ(s.avg_chars, 0.0);
}

TEST(ComputeStats, TenPairFixtureMatchesHandComputation) {
  // 40 words and 197 code points over 20 texts, counted independently.
  const auto pairs = load_dataset(DatasetDescriptor::for_dataset(Dataset::Generic),
                                  fixture("stats/ten_pairs.jsonl"));
  const auto s = compute_stats(pairs);
  EXPECT_EQ(s.n_support, 6u);
  EXPECT_EQ(s.n_attack, 4u);
  EXPECT_DOUBLE_EQ(s.avg_words, 2.0);
  EXPECT_DOUBLE_EQ(s.avg_chars, 9.85);
}
