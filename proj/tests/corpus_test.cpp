#include "darija/corpus.hpp"
#include "darija/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

namespace darija {
namespace {

using enum Label;

// Independent oracle: the label with at least four of five votes.
VoteOutcome vote_oracle(const std::vector<Label>& votes) {
  const auto pos = std::count(votes.begin(), votes.end(), Positive);
  if (pos >= 4) return VoteOutcome::Positive;
  if (5 - pos >= 4) return VoteOutcome::Negative;
  return VoteOutcome::Undecided;
}

std::vector<Label> pattern(unsigned bits) {
  std::vector<Label> v;
  for (int i = 0; i < 5; ++i) v.push_back((bits >> i) & 1u ? Positive : Negative);
  return v;
}

TEST(Votes, WorkedExamples) {
  const std::vector<Label> four{Positive, Positive, Positive, Positive, Negative};
  EXPECT_EQ(aggregate_votes(four), VoteOutcome::Positive);
  const std::vector<Label> none(5, Negative);
  EXPECT_EQ(aggregate_votes(none), VoteOutcome::Negative);
  const std::vector<Label> split{Positive, Positive, Positive, Negative, Negative};
  EXPECT_EQ(aggregate_votes(split), VoteOutcome::Undecided);
}

TEST(Votes, ExhaustiveAgainstOracle) {
  int decided = 0;
  for (unsigned bits = 0; bits < 32; ++bits) {
    const auto v = pattern(bits);
    const auto got = aggregate_votes(v);
    EXPECT_EQ(got, vote_oracle(v)) << "pattern " << bits;
    decided += got != VoteOutcome::Undecided;
  }
  EXPECT_EQ(decided, 12);
}

TEST(Votes, PermutationInvariant) {
  for (unsigned bits = 0; bits < 32; ++bits) {
    auto v = pattern(bits);
    const auto expected = aggregate_votes(v);
    std::sort(v.begin(), v.end());
    do {
      ASSERT_EQ(aggregate_votes(v), expected);
    } while (std::next_permutation(v.begin(), v.end()));
  }
}

TEST(Votes, WrongArityIsAnError) {
  const std::vector<Label> four(4, Positive);
  const std::vector<Label> six(6, Positive);
  EXPECT_THROW(aggregate_votes(four), DataError);
  EXPECT_THROW(aggregate_votes(six), DataError);
}

TEST(Jsonl, FullRecord) {
  const auto c = parse_jsonl(R"({"id":"c1","text":"هادشي زوين","label":"positive"})");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].id, "c1");
  EXPECT_EQ(c[0].raw_text, "هادشي زوين");
  EXPECT_EQ(c[0].label, Positive);
}

TEST(Jsonl, EmptyInputIsEmptyCorpus) {
  EXPECT_EQ(parse_jsonl("").size(), 0u);
  EXPECT_EQ(parse_jsonl("\n\n").size(), 0u);
}

TEST(Jsonl, UnknownFieldsIgnoredAndOrderKept) {
  const auto c = parse_jsonl("{\"id\":\"b\",\"text\":\"x\",\"likes\":3}\n{\"id\":\"a\",\"text\":\"y\"}\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].id, "b");
  EXPECT_EQ(c[1].id, "a");
  EXPECT_FALSE(c[1].label.has_value());
}

std::string error_of(const std::string& text) {
  try {
    parse_jsonl(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

TEST(Jsonl, DuplicateIdNamesBothLines) {
  const auto msg = error_of("{\"id\":\"c1\",\"text\":\"a\"}\n{\"id\":\"c2\",\"text\":\"b\"}\n{\"id\":\"c1\",\"text\":\"c\"}\n");
  EXPECT_NE(msg.find("c1"), std::string::npos) << msg;
  EXPECT_NE(msg.find('1'), std::string::npos) << msg;
  EXPECT_NE(msg.find('3'), std::string::npos) << msg;
}

TEST(Jsonl, MalformedRecordNamesLineAndField) {
  auto msg = error_of("{\"id\":\"c1\",\"text\":\"a\"}\n{\"id\":\"c2\",\"text\":\"b\",\"label\":\"meh\"}\n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("label"), std::string::npos) << msg;
  msg = error_of("{\"id\":\"c1\",\"text\":\"a\",\"votes\":[\"positive\"]}\n");
  EXPECT_NE(msg.find("votes"), std::string::npos) << msg;
  msg = error_of("{\"text\":\"a\"}\n");
  EXPECT_NE(msg.find("id"), std::string::npos) << msg;
  msg = error_of("{\"id\":\"c1\",\"text\":\"   \"}\n");
  EXPECT_NE(msg.find("text"), std::string::npos) << msg;
  msg = error_of("not json\n");
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
}

TEST(Jsonl, InvalidUtf8IsADecodeError) {
  EXPECT_THROW(parse_jsonl("{\"id\":\"c1\",\"text\":\"\xff\"}\n"), DataError);
}

TEST(Csv, QuotedFieldsAndHeader) {
  const auto c = parse_csv("id,text,label,script\nc1,\"zwin, bzaf\",positive,latin\nc2,\"say \"\"hi\"\"\",,\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].raw_text, "zwin, bzaf");
  EXPECT_EQ(c[0].script, Script::Latin);
  EXPECT_EQ(c[1].raw_text, "say \"hi\"");
  EXPECT_FALSE(c[1].label.has_value());
  EXPECT_THROW(parse_csv("name,body\nx,y\n"), DataError);
}

Corpus sample_corpus() {
  std::vector<LabeledComment> v;
  v.push_back({"a1", "هادشي زوين 😀", Positive, Script::Arabic, std::vector<Label>{Positive, Positive, Positive, Positive, Negative}});
  v.push_back({"a2", "3jbni had lproduit", Positive, Script::Latin, std::nullopt});
  v.push_back({"a3", "khayb \"bzaf\", wallah", Negative, Script::Mixed, std::nullopt});
  v.push_back({"a4", "line\nbreak", std::nullopt, std::nullopt, std::vector<Label>{Positive, Negative, Positive, Negative, Positive}});
  return Corpus(std::move(v), "test");
}

TEST(RoundTrip, JsonlAndCsv) {
  const auto c = sample_corpus();
  EXPECT_EQ(parse_jsonl(to_jsonl(c), "test"), c);

  // CSV has no votes column.
  std::vector<LabeledComment> no_votes(c.comments().begin(), c.comments().end());
  for (auto& x : no_votes) x.votes.reset();
  const Corpus plain(no_votes, "test");
  EXPECT_EQ(parse_csv(to_csv(plain), "test"), plain);
}

TEST(RoundTrip, ThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto c = sample_corpus();
  const auto path = dir / "darija_roundtrip.jsonl";
  save_corpus(c, path, CorpusFormat::Jsonl);
  const auto back = load_corpus(path, CorpusFormat::Jsonl);
  EXPECT_EQ(std::vector<LabeledComment>(back.comments().begin(), back.comments().end()),
            std::vector<LabeledComment>(c.comments().begin(), c.comments().end()));
  std::filesystem::remove(path);
  EXPECT_THROW(load_corpus(dir / "darija_missing.jsonl", CorpusFormat::Jsonl), DataError);
}

TEST(Modeling, UndecidedAreExcluded) {
  const auto c = sample_corpus();
  EXPECT_TRUE(c[3].undecided());
  const auto m = c.modeling_subset();
  EXPECT_EQ(m.size(), 3u);
  for (const auto& x : m.comments()) EXPECT_TRUE(x.label.has_value());
}

TEST(Modeling, VotesAloneDecide) {
  LabeledComment c{"v", "x", std::nullopt, std::nullopt, std::vector<Label>{Negative, Negative, Negative, Negative, Positive}};
  EXPECT_EQ(c.effective_label(), Negative);
  EXPECT_FALSE(c.undecided());
}

Corpus balanced(std::size_t pos, std::size_t neg) {
  std::vector<LabeledComment> v;
  for (std::size_t i = 0; i < pos + neg; ++i) {
    v.push_back({"c" + std::to_string(i), "t", i < pos ? Positive : Negative, std::nullopt, std::nullopt});
  }
  return Corpus(std::move(v));
}

std::size_t count(const Corpus& c, Label l) {
  return static_cast<std::size_t>(
      std::count_if(c.comments().begin(), c.comments().end(), [&](const auto& x) { return x.label == l; }));
}

TEST(Split, TenAndTenAtEightyPercent) {
  for (std::uint64_t seed : {1u, 42u, 999u}) {
    const auto s = stratified_split(balanced(10, 10), {Fraction{4, 5}, seed, true});
    EXPECT_EQ(count(s.train, Positive), 8u);
    EXPECT_EQ(count(s.train, Negative), 8u);
    EXPECT_EQ(count(s.test, Positive), 2u);
    EXPECT_EQ(count(s.test, Negative), 2u);
  }
}

TEST(Split, Deterministic) {
  const auto c = balanced(13, 7);
  const auto a = stratified_split(c, {Fraction{4, 5}, 5, true});
  const auto b = stratified_split(c, {Fraction{4, 5}, 5, true});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
}

TEST(Split, OneOfEachAtHalf) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = stratified_split(balanced(1, 1), {Fraction{1, 2}, seed, true});
    ASSERT_EQ(s.train.size(), 1u);
    ASSERT_EQ(s.test.size(), 1u);
    EXPECT_NE(s.train[0].label, s.test[0].label);
  }
}

TEST(Split, PartitionWithinOnePerClass) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t pos = 1 + seed % 11, neg = 2 + seed % 7;
    const auto c = balanced(pos, neg);
    const Fraction f{2, 3};
    const auto s = stratified_split(c, {f, seed, true});
    std::multiset<std::string> ids;
    for (const auto& x : s.train.comments()) ids.insert(x.id);
    for (const auto& x : s.test.comments()) ids.insert(x.id);
    ASSERT_EQ(ids.size(), c.size());
    ASSERT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), c.size());
    for (auto [label, n] : {std::pair{Positive, pos}, std::pair{Negative, neg}}) {
      const double target = f.value() * static_cast<double>(n);
      EXPECT_LE(std::abs(static_cast<double>(count(s.train, label)) - target), 1.0);
    }
  }
}

TEST(Split, UnlabeledCommentsAreListed) {
  std::vector<LabeledComment> v{{"x1", "a", Positive, std::nullopt, std::nullopt},
                                {"x2", "b", std::nullopt, std::nullopt, std::nullopt}};
  try {
    stratified_split(Corpus(v), {});
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("x2"), std::string::npos);
  }
}

TEST(Split, FractionMustBeProper) {
  EXPECT_THROW(stratified_split(balanced(2, 2), {Fraction{1, 1}, 1, true}), ConfigError);
  EXPECT_THROW(Fraction::parse("0"), ConfigError);
  EXPECT_EQ(Fraction::parse("0.8").num * 5, Fraction::parse("0.8").den * 4);
  EXPECT_EQ(Fraction::parse("3/4").den, 4u);
}

TEST(Stats, CountsSumToSize) {
  const auto s = corpus_stats(sample_corpus());
  EXPECT_EQ(s.total, 4u);
  EXPECT_EQ(s.positive + s.negative + s.undecided + s.unlabeled, s.total);
  EXPECT_EQ(s.arabic + s.latin + s.mixed + s.unknown_script, s.total);
  EXPECT_EQ(s.positive, 2u);
  EXPECT_EQ(s.negative, 1u);
  EXPECT_EQ(s.undecided, 1u);
}

TEST(Stats, EmptyAndSmall) {
  const auto e = corpus_stats(Corpus{});
  EXPECT_EQ(e.total, 0u);
  EXPECT_EQ(e.positive, 0u);
  EXPECT_EQ(e.mean_length, 0.0);
  const auto s = corpus_stats(balanced(3, 1));
  EXPECT_EQ(s.positive, 3u);
  EXPECT_EQ(s.negative, 1u);
}

TEST(Stats, CorpusShape) {
  const auto s = corpus_stats(balanced(10000, 10000));
  EXPECT_EQ(s.total, 20000u);
  EXPECT_EQ(s.positive, 10000u);
  EXPECT_EQ(s.negative, 10000u);
}

}  // namespace
}  // namespace darija
