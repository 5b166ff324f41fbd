#include "darija/error.hpp"
#include "darija/rng.hpp"
#include "darija/unicode.hpp"

#include <gtest/gtest.h>

#include <array>
#include <set>

namespace darija {
namespace {

TEST(Utf8, RoundTripsMixedScripts) {
  const std::string text = "زوين merci 😀 ⵣ";
  const auto cps = unicode::decode(text);
  EXPECT_EQ(cps[0], U'ز');
  EXPECT_EQ(unicode::encode(cps), text);
}

TEST(Utf8, RejectsMalformedSequences) {
  EXPECT_THROW(unicode::decode("\xC0\xAF"), DataError);          // overlong '/'
  EXPECT_THROW(unicode::decode("\xED\xA0\x80"), DataError);      // surrogate
  EXPECT_THROW(unicode::decode("\xE2\x82"), DataError);          // truncated
  EXPECT_THROW(unicode::decode("\xF4\x90\x80\x80"), DataError);  // past U+10FFFF
  EXPECT_EQ(unicode::find_invalid("ok\xFFok"), std::optional<std::size_t>(2));
  EXPECT_FALSE(unicode::find_invalid("زوين").has_value());
}

TEST(Classes, DigitsIncludeArabicIndic) {
  EXPECT_TRUE(unicode::is_digit(U'7'));
  EXPECT_TRUE(unicode::is_digit(U'٣'));
  EXPECT_TRUE(unicode::is_digit(U'۴'));
  EXPECT_FALSE(unicode::is_digit(U'a'));
}

TEST(Classes, ArabicLettersAndMarks) {
  EXPECT_TRUE(unicode::is_letter(U'ز'));
  EXPECT_TRUE(unicode::is_letter(U'ة'));
  EXPECT_TRUE(unicode::is_mark(0x064E));
  EXPECT_TRUE(unicode::is_arabic_diacritic(0x0670));
  EXPECT_FALSE(unicode::is_arabic_diacritic(U'ا'));
}

TEST(Classes, SentencePunctuation) {
  for (char32_t c : {U'.', U',', U'!', U'?', U'،', U'؟'}) EXPECT_TRUE(unicode::is_sentence_punct(c));
  EXPECT_FALSE(unicode::is_sentence_punct(U'*'));
}

TEST(Emoji, DocumentedRangesAreBases) {
  for (char32_t c : {char32_t{0x1F300}, char32_t{0x1F5FF}, char32_t{0x1F600}, char32_t{0x1F64F}, char32_t{0x1F680},
                     char32_t{0x1F6FF}, char32_t{0x1F900}, char32_t{0x1F9FF}, char32_t{0x2600}, char32_t{0x27BF}}) {
    EXPECT_TRUE(unicode::is_emoji_base(c)) << std::hex << static_cast<unsigned>(c);
  }
  EXPECT_FALSE(unicode::is_emoji_base(U'a'));
  EXPECT_FALSE(unicode::is_emoji_base(0x25FF));
}

TEST(Emoji, ClustersAbsorbSelectorsAndJoiners) {
  const std::u32string family = U"\U0001F468‍\U0001F469‍\U0001F467x";
  EXPECT_EQ(unicode::emoji_cluster_length(family, 0), 5u);
  const std::u32string heart = U"❤️x";
  EXPECT_EQ(unicode::emoji_cluster_length(heart, 0), 2u);
  const std::u32string thumbs = U"\U0001F44D\U0001F3FD";
  EXPECT_EQ(unicode::emoji_cluster_length(thumbs, 0), 2u);
  EXPECT_EQ(unicode::emoji_cluster_length(U"abc", 0), 0u);
}

TEST(Latin, Lowercasing) {
  EXPECT_EQ(unicode::to_lower_latin(U'A'), U'a');
  EXPECT_EQ(unicode::to_lower_latin(U'É'), U'é');
  EXPECT_EQ(unicode::to_lower_latin(U'ز'), U'ز');
}

TEST(Rng, SameSeedSameStream) {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng rng(1);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.uniform_index(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(3);
  std::array<int, 10> x{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(x);
  std::array<int, 10> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::array<int, 10>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
}

}  // namespace
}  // namespace darija
