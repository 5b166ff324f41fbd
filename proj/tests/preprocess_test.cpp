#include "darija/error.hpp"
#include "darija/preprocess.hpp"
#include "darija/rng.hpp"
#include "darija/unicode.hpp"

#include "golden_preprocess.hpp"

#include <gtest/gtest.h>

namespace darija {
namespace {

TEST(Golden, CleanText) {
  for (const auto& c : testing::clean_golden()) {
    EXPECT_EQ(clean_text(c.input), c.expected) << c.name;
  }
}

TEST(Golden, TokenSequences) {
  ASSERT_GE(testing::clean_golden().size() + testing::token_golden().size(), 25u);
  for (const auto& c : testing::token_golden()) {
    EXPECT_EQ(testing::run_golden(c).tokens, c.expected) << c.name;
  }
}

// Random strings over the characters the rules care about.
std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces{
      "a", "B", "z", "o", "o", "O", "3", "7", "9", "0", "٣", "ز", "و", "ي", "ن", "أ", "إ", "آ", "ا", "ة", "ه",
      "َ", "ّ", "ـ", " ", " ", "  ", "\t", ".", ",", "!", "?", "،", "؟", "*", "#", "/", ":", "-",
      "@", "_", "😀", "❤️", "‍", "️", "👍🏽", "http://", "www.", "2:32", "12/05/2021", "É", "ç"};
  std::string s;
  const std::size_t n = rng.uniform_index(25);
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng.uniform_index(pieces.size())];
  return s;
}

TEST(Properties, CleanIsIdempotent) {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_text(rng);
    const auto once = clean_text(s);
    ASSERT_EQ(clean_text(once), once) << "input: " << s;
  }
}

TEST(Properties, NormalizeLaws) {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    const auto seq = tokenize(random_text(rng));
    const auto once = normalize_tokens(seq);
    ASSERT_EQ(normalize_tokens(once), once);
    std::size_t kept = 0;
    for (const auto& t : seq.tokens) {
      const auto n = t.kind == TokenKind::Word ? normalize_word(t.text) : t.text;
      if (t.kind == TokenKind::Word) {
        ASSERT_LE(unicode::decode(n).size(), unicode::decode(t.text).size()) << t.text;
      }
      kept += !n.empty();
    }
    // Only tokens that normalize to nothing disappear.
    ASSERT_EQ(once.size(), kept);
  }
}

TEST(Properties, FullPipelineOutputIsClean) {
  Rng rng(29);
  const auto config = PipelineConfig::full(EmojiMode::Delete);
  for (int i = 0; i < 2000; ++i) {
    const auto seq = process_text(random_text(rng), "x", config);
    for (const auto& t : seq.tokens) {
      ASSERT_EQ(t.kind, TokenKind::Word);
      ASSERT_FALSE(t.text.empty());
      for (char32_t c : unicode::decode(t.text)) {
        ASSERT_FALSE(unicode::is_whitespace(c)) << t.text;
        ASSERT_FALSE(c >= 0x064B && c <= 0x065F) << t.text;
        ASSERT_TRUE(c != U'أ' && c != U'إ' && c != U'آ' && c != U'ة') << t.text;
      }
    }
  }
}

TEST(Properties, KeepModeTokensHaveNoWhitespace) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    for (const auto& t : process_text(random_text(rng), "x", PipelineConfig::full(EmojiMode::Keep)).tokens) {
      for (char32_t c : unicode::decode(t.text)) ASSERT_FALSE(unicode::is_whitespace(c));
    }
  }
}

TEST(Tokenize, EmojiGluedToWord) {
  const auto seq = tokenize("top!😀");
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq.tokens[0], (Token{"top", TokenKind::Word}));
  EXPECT_EQ(seq.tokens[1], (Token{"😀", TokenKind::Emoji}));
  EXPECT_TRUE(tokenize("").empty());
}

TEST(EmojiMode, KeepDelete) {
  TokenSequence seq{{{"زوين", TokenKind::Word}, {"😀", TokenKind::Emoji}}, "x"};
  EXPECT_EQ(apply_emoji_mode(seq, EmojiMode::Keep), seq);
  EXPECT_EQ(apply_emoji_mode(seq, EmojiMode::Delete).tokens, (std::vector<Token>{{"زوين", TokenKind::Word}}));
  TokenSequence plain{{{"a", TokenKind::Word}, {"b", TokenKind::Word}}, "y"};
  EXPECT_EQ(apply_emoji_mode(plain, EmojiMode::Delete), plain);
}

TEST(Stopwords, ExactMatchOnly) {
  PipelineConfig c;
  c.stopwords_latin = {"had"};
  TokenSequence seq{{{"had", TokenKind::Word}, {"lproduit", TokenKind::Word}, {"hadd", TokenKind::Word}}, "x"};
  EXPECT_EQ(remove_stopwords(seq, c).tokens,
            (std::vector<Token>{{"lproduit", TokenKind::Word}, {"hadd", TokenKind::Word}}));
  EXPECT_EQ(remove_stopwords(seq, PipelineConfig{}), seq);
}

TEST(Stopwords, ShippedListsContainHad) {
  EXPECT_TRUE(default_stopwords_latin().contains("had"));
  EXPECT_TRUE(default_stopwords_arabic().contains("هاد"));
  EXPECT_FALSE(default_stopwords_latin().contains("ma"));
}

TEST(Stopwords, EntriesAreNormalized) {
  const auto words = parse_stopwords("# comment\nإلى\n  HAD  \n\nمدرسة # trailing\n");
  EXPECT_EQ(words, (std::set<std::string>{"الى", "had", "مدرسه"}));
}

std::vector<TokenSequence> docs(std::initializer_list<std::initializer_list<const char*>> lists) {
  std::vector<TokenSequence> out;
  int i = 0;
  for (auto l : lists) {
    TokenSequence s;
    s.source_id = "d" + std::to_string(i++);
    for (auto w : l) s.tokens.push_back({w, TokenKind::Word});
    out.push_back(s);
  }
  return out;
}

TEST(Dedup, FirstOccurrenceWins) {
  const auto out = dedup_corpus(docs({{"a", "b"}, {"a", "b"}, {"a", "c"}}));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].source_id, "d0");
  EXPECT_EQ(out[1].source_id, "d2");
  const auto distinct = docs({{"a"}, {"b"}, {"c"}});
  EXPECT_EQ(dedup_corpus(distinct), distinct);
}

TEST(Pipeline, DuplicatesAfterNormalization) {
  const Corpus c({{"1", "tooop", Label::Positive, std::nullopt, std::nullopt},
                  {"2", "top", Label::Positive, std::nullopt, std::nullopt}});
  const auto r = run_pipeline(c, PipelineConfig::full(EmojiMode::Keep));
  ASSERT_EQ(r.docs.size(), 1u);
  EXPECT_EQ(r.docs[0].source_id, "1");
  EXPECT_EQ(r.dropped_duplicates, 1u);
}

TEST(Pipeline, ArabiziProductComment) {
  const Corpus c({{"1", "3jbni had lproduit", Label::Positive, std::nullopt, std::nullopt}});
  const auto r = run_pipeline(c, PipelineConfig::full(EmojiMode::Delete));
  ASSERT_EQ(r.docs.size(), 1u);
  EXPECT_EQ(r.docs[0].joined(), "3jbni lproduit");
}

TEST(Pipeline, RawConditionOnlyTokenizes) {
  const Corpus c({{"1", "Zwiiin 2:32, had", Label::Positive, std::nullopt, std::nullopt},
                  {"2", "Zwiiin 2:32, had", Label::Positive, std::nullopt, std::nullopt}});
  const auto r = run_pipeline(c, PipelineConfig::raw());
  ASSERT_EQ(r.docs.size(), 2u);
  EXPECT_EQ(r.docs[0].joined(), "Zwiiin 2:32 had");
}

TEST(Pipeline, EmojiOnlyCommentDroppedAndCounted) {
  const Corpus c({{"1", "😀 😡", Label::Positive, std::nullopt, std::nullopt},
                  {"2", "zwin", Label::Positive, std::nullopt, std::nullopt},
                  {"3", "bzaf", Label::Negative, std::nullopt, std::nullopt}});
  const auto r = run_pipeline(c, PipelineConfig::full(EmojiMode::Delete));
  ASSERT_EQ(r.docs.size(), 2u);
  EXPECT_EQ(r.dropped_empty, 1u);
  EXPECT_EQ(r.docs[0].source_id, "2");
  EXPECT_EQ(r.docs[1].source_id, "3");
}

TEST(Config, TokenizeCannotBeDisabledBeforeLaterStages) {
  auto c = PipelineConfig::full(EmojiMode::Keep);
  c.stages.tokenize = false;
  EXPECT_THROW(c.validate(), ConfigError);
  c.stages = StageSet{true, false, false, false, false, false};
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, CanonicalRoundTrip) {
  auto c = PipelineConfig::full(EmojiMode::Delete);
  c.stages.dedup = false;
  EXPECT_EQ(PipelineConfig::from_canonical(c.canonical()), c);
  EXPECT_EQ(PipelineConfig::from_canonical(PipelineConfig::raw().canonical()), PipelineConfig::raw());
  EXPECT_THROW(PipelineConfig::from_canonical("stage.clean=maybe\n"), ConfigError);
}

}  // namespace
}  // namespace darija
