#include "darija/error.hpp"
#include "darija/features.hpp"
#include "darija/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace darija {
namespace {

TokenSequence words(std::initializer_list<const char*> ws) {
  TokenSequence s;
  for (auto w : ws) s.tokens.push_back({w, TokenKind::Word});
  return s;
}

std::vector<std::string> terms(const Vocabulary& v) { return {v.terms().begin(), v.terms().end()}; }

TEST(Vocabulary, CountsDocumentFrequency) {
  const std::vector<TokenSequence> docs{words({"a", "b"}), words({"a", "c"})};
  const auto v = build_vocabulary(docs, NGramMode::Unigram);
  EXPECT_EQ(terms(v), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(std::vector<std::size_t>(v.doc_frequency().begin(), v.doc_frequency().end()),
            (std::vector<std::size_t>{2, 1, 1}));
  EXPECT_EQ(v.num_docs(), 2u);
}

TEST(Vocabulary, MinDfThreshold) {
  const std::vector<TokenSequence> docs{words({"a", "b"}), words({"a", "c"})};
  EXPECT_EQ(terms(build_vocabulary(docs, NGramMode::Unigram, 2)), (std::vector<std::string>{"a"}));
  EXPECT_THROW(build_vocabulary(docs, NGramMode::Unigram, 0), DataError);
}

TEST(Vocabulary, EmptyTrainingSetIsRejected) {
  EXPECT_THROW(build_vocabulary(std::vector<TokenSequence>{}, NGramMode::Unigram), DataError);
}

TEST(Ngrams, BigramsAreAdjacentPairs) {
  EXPECT_EQ(extract_ngrams(words({"a", "b", "c"}), NGramMode::Bigram), (std::vector<std::string>{"a b", "b c"}));
  EXPECT_EQ(extract_ngrams(words({"a"}), NGramMode::Bigram), std::vector<std::string>{});
  EXPECT_EQ(extract_ngrams(words({"a", "b"}), NGramMode::Both), (std::vector<std::string>{"a", "b", "a b"}));
}

TEST(TfIdf, HandComputedExample) {
  const std::vector<TokenSequence> docs{words({"a", "a", "b"}), words({"a", "c"})};
  const auto v = build_vocabulary(docs, NGramMode::Unigram);
  EXPECT_DOUBLE_EQ(v.idf(*v.index_of("a")), 1.0);
  EXPECT_NEAR(v.idf(*v.index_of("b")), std::log(1.5) + 1.0, 1e-15);
  const auto x = tfidf_vector(docs[0], v);
  EXPECT_NEAR(x.coeff(0), 0.8182, 5e-5);
  EXPECT_NEAR(x.coeff(1), 0.5750, 5e-5);
  EXPECT_EQ(x.coeff(2), 0.0);
  EXPECT_EQ(x.nonZeros(), 2);
}

TEST(TfIdf, EmptyAndSingleTermDocuments) {
  const std::vector<TokenSequence> docs{words({"a", "b"}), words({"a", "c"})};
  const auto v = build_vocabulary(docs, NGramMode::Unigram);
  EXPECT_EQ(tfidf_vector(words({}), v).nonZeros(), 0);
  EXPECT_EQ(tfidf_vector(words({"zzz"}), v).nonZeros(), 0);
  const auto one = tfidf_vector(words({"c", "c"}), v);
  EXPECT_EQ(one.nonZeros(), 1);
  EXPECT_DOUBLE_EQ(one.coeff(2), 1.0);
}

TEST(Counts, RawCounts) {
  const std::vector<TokenSequence> docs{words({"a", "a", "b"}), words({"a", "c"})};
  const auto v = build_vocabulary(docs, NGramMode::Unigram);
  const auto x = count_vector(docs[0], v);
  EXPECT_EQ(x.coeff(0), 2.0);
  EXPECT_EQ(x.coeff(1), 1.0);
  EXPECT_EQ(x.nonZeros(), 2);
  EXPECT_EQ(count_vector(words({"q"}), v).nonZeros(), 0);

  const std::vector<TokenSequence> bdocs{words({"a", "b", "a", "b"})};
  const auto bv = build_vocabulary(bdocs, NGramMode::Bigram);
  const auto bx = count_vector(bdocs[0], bv);
  EXPECT_EQ(bx.coeff(*bv.index_of("a b")), 2.0);
  EXPECT_EQ(bx.coeff(*bv.index_of("b a")), 1.0);
}

std::vector<TokenSequence> random_docs(Rng& rng) {
  static const char* alphabet[] = {"zwin", "khayb", "bzaf", "walo", "mzyan", "3jbni", "top", "hchouma"};
  std::vector<TokenSequence> docs(1 + rng.uniform_index(12));
  for (auto& d : docs) {
    const auto len = rng.uniform_index(7);
    for (std::size_t i = 0; i < len; ++i) d.tokens.push_back({alphabet[rng.uniform_index(8)], TokenKind::Word});
  }
  docs[0].tokens.push_back({"zwin", TokenKind::Word});
  return docs;
}

TEST(Properties, NormsIdfAndIndices) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto docs = random_docs(rng);
    const auto mode = static_cast<NGramMode>(rng.uniform_index(3));
    const auto v = build_vocabulary(docs, mode);
    for (const auto& d : docs) {
      const auto x = tfidf_vector(d, v);
      ASSERT_EQ(x.size(), static_cast<Eigen::Index>(v.size()));
      if (x.nonZeros() > 0) {
        ASSERT_NEAR(x.norm(), 1.0, 1e-12);
      }
      for (SparseVector::InnerIterator it(x); it; ++it) ASSERT_NE(it.value(), 0.0);
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v.doc_frequency()[i] <= v.doc_frequency()[j]) ASSERT_GE(v.idf(i), v.idf(j));
      }
      if (v.doc_frequency()[i] == v.num_docs()) ASSERT_EQ(v.idf(i), 1.0);
    }
    ASSERT_EQ(build_vocabulary(docs, mode), v);
  }
}

TEST(Serialization, RoundTrip) {
  const std::vector<TokenSequence> docs{words({"zwin", "bzaf"}), words({"khayb", "bzaf", "l9ahwa"})};
  const auto v = build_vocabulary(docs, NGramMode::Both);
  std::stringstream ss;
  v.write(ss);
  const auto back = Vocabulary::read(ss);
  EXPECT_EQ(back, v);
  EXPECT_EQ(back.index_of("bzaf l9ahwa"), v.index_of("bzaf l9ahwa"));
}

TEST(Serialization, MalformedInputIsDataError) {
  std::stringstream bad_count("vocabulary N=x size=1\na\t0\t1\n");
  EXPECT_THROW(Vocabulary::read(bad_count), DataError);
  std::stringstream truncated("vocabulary N=2 min_df=1 ngram=unigram size=2\na\t0\t1\n");
  EXPECT_THROW(Vocabulary::read(truncated), DataError);
}

}  // namespace
}  // namespace darija
