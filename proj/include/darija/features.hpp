#pragma once

#include "darija/preprocess.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace darija {

/// Term-indexed feature weights; size() is the vocabulary size. Stored
/// entries are never zero.
using SparseVector = Eigen::SparseVector<double>;

enum class NGramMode : std::uint8_t { Unigram, Bigram, Both };
std::string_view to_string(NGramMode m);
std::optional<NGramMode> parse_ngram_mode(std::string_view s);

/// n-gram strings of a document in order of occurrence, duplicates kept.
/// Bigrams join adjacent tokens with one space.
std::vector<std::string> extract_ngrams(const TokenSequence& doc, NGramMode mode);

/// Terms in lexicographic (byte) order with dense indices and document
/// frequencies over the training documents.
class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  std::size_t num_docs() const { return num_docs_; }
  std::size_t min_df() const { return min_df_; }
  NGramMode mode() const { return mode_; }

  std::span<const std::string> terms() const { return terms_; }
  std::span<const std::size_t> doc_frequency() const { return df_; }
  std::optional<std::size_t> index_of(const std::string& term) const;

  /// ln((1 + N) / (1 + df)) + 1.
  double idf(std::size_t index) const;

  void write(std::ostream& os) const;
  static Vocabulary read(std::istream& is);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.df_ == b.df_ && a.num_docs_ == b.num_docs_ &&
           a.min_df_ == b.min_df_ && a.mode_ == b.mode_;
  }

 private:
  friend Vocabulary build_vocabulary(std::span<const TokenSequence>, NGramMode, std::size_t);
  void reindex();

  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t num_docs_ = 0;
  std::size_t min_df_ = 1;
  NGramMode mode_ = NGramMode::Unigram;
};

/// Throws DataError on an empty training set or min_df < 1.
Vocabulary build_vocabulary(std::span<const TokenSequence> train_docs, NGramMode mode,
                            std::size_t min_df = 1);

/// Raw n-gram counts; out-of-vocabulary terms are dropped.
SparseVector count_vector(const TokenSequence& doc, const Vocabulary& vocab);

/// tf * idf, L2-normalized. Empty and all-OOV documents give the zero vector.
SparseVector tfidf_vector(const TokenSequence& doc, const Vocabulary& vocab);

}  // namespace darija
