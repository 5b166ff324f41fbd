#include "darija/features.hpp"

#include "darija/error.hpp"
#include "darija/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace darija {

namespace {

// Counts per vocabulary index, in ascending index order.
std::map<std::size_t, double> term_counts(const TokenSequence& doc, const Vocabulary& vocab) {
  std::map<std::size_t, double> counts;
  for (const auto& g : extract_ngrams(doc, vocab.mode())) {
    if (auto idx = vocab.index_of(g)) counts[*idx] += 1.0;
  }
  return counts;
}

SparseVector to_sparse(const std::map<std::size_t, double>& entries, std::size_t dim) {
  SparseVector v(static_cast<Eigen::Index>(dim));
  v.reserve(static_cast<Eigen::Index>(entries.size()));
  for (const auto& [idx, w] : entries) {
    if (w != 0.0) v.insertBack(static_cast<Eigen::Index>(idx)) = w;
  }
  return v;
}

}  // namespace

std::string_view to_string(NGramMode m) {
  switch (m) {
    case NGramMode::Unigram: return "unigram";
    case NGramMode::Bigram: return "bigram";
    case NGramMode::Both: return "both";
  }
  return "?";
}

std::optional<NGramMode> parse_ngram_mode(std::string_view s) {
  if (s == "unigram") return NGramMode::Unigram;
  if (s == "bigram") return NGramMode::Bigram;
  if (s == "both") return NGramMode::Both;
  return std::nullopt;
}

std::vector<std::string> extract_ngrams(const TokenSequence& doc, NGramMode mode) {
  std::vector<std::string> grams;
  const auto& toks = doc.tokens;
  if (mode != NGramMode::Bigram) {
    for (const auto& t : toks) grams.push_back(t.text);
  }
  if (mode != NGramMode::Unigram) {
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) grams.push_back(toks[i].text + ' ' + toks[i + 1].text);
  }
  return grams;
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::size_t index) const {
  const auto n = static_cast<double>(num_docs_);
  const auto df = static_cast<double>(df_.at(index));
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

void Vocabulary::reindex() {
  index_.clear();
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

void Vocabulary::write(std::ostream& os) const {
  os << "vocabulary N=" << num_docs_ << " min_df=" << min_df_ << " ngram=" << to_string(mode_)
     << " size=" << terms_.size() << '\n';
  for (std::size_t i = 0; i < terms_.size(); ++i) os << terms_[i] << '\t' << i << '\t' << df_[i] << '\n';
}

Vocabulary Vocabulary::read(std::istream& is) {
  auto bad = [](const std::string& what) { return DataError("vocabulary: " + what); };
  std::string header;
  if (!std::getline(is, header)) throw bad("missing header");
  std::istringstream hs(header);
  std::string word;
  hs >> word;
  if (word != "vocabulary") throw bad("bad header '" + header + "'");
  Vocabulary v;
  std::size_t size = 0;
  bool have_size = false;
  while (hs >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw bad("bad header field '" + word + "'");
    const auto key = word.substr(0, eq), val = word.substr(eq + 1);
    if (key == "N") {
      v.num_docs_ = text_io::parse_size(val);
    } else if (key == "min_df") {
      v.min_df_ = text_io::parse_size(val);
    } else if (key == "ngram") {
      auto m = parse_ngram_mode(val);
      if (!m) throw bad("unknown ngram mode '" + val + "'");
      v.mode_ = *m;
    } else if (key == "size") {
      size = text_io::parse_size(val);
      have_size = true;
    }
  }
  if (!have_size) throw bad("header lacks size");
  v.terms_.reserve(size);
  v.df_.reserve(size);
  std::string line;
  for (std::size_t i = 0; i < size; ++i) {
    if (!std::getline(is, line)) throw bad("truncated after " + std::to_string(i) + " terms");
    const auto t1 = line.find('\t');
    const auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) throw bad("malformed line '" + line + "'");
    if (text_io::parse_size(line.substr(t1 + 1, t2 - t1 - 1)) != i) throw bad("non-dense index at line " + line);
    v.terms_.push_back(line.substr(0, t1));
    v.df_.push_back(text_io::parse_size(line.substr(t2 + 1)));
    if (i > 0 && !(v.terms_[i - 1] < v.terms_[i])) throw bad("terms out of order");
  }
  v.reindex();
  return v;
}

Vocabulary build_vocabulary(std::span<const TokenSequence> train_docs, NGramMode mode, std::size_t min_df) {
  if (train_docs.empty()) throw DataError("cannot build a vocabulary from an empty training corpus");
  if (min_df < 1) throw ConfigError("min_df must be at least 1");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : train_docs) {
    auto grams = extract_ngrams(doc, mode);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }
  Vocabulary v;
  v.num_docs_ = train_docs.size();
  v.min_df_ = min_df;
  v.mode_ = mode;
  for (auto& [term, count] : df) {
    if (count < min_df) continue;
    v.terms_.push_back(term);
    v.df_.push_back(count);
  }
  v.reindex();
  return v;
}

SparseVector count_vector(const TokenSequence& doc, const Vocabulary& vocab) {
  return to_sparse(term_counts(doc, vocab), vocab.size());
}

SparseVector tfidf_vector(const TokenSequence& doc, const Vocabulary& vocab) {
  auto weights = term_counts(doc, vocab);
  double sq = 0.0;
  for (auto& [idx, w] : weights) {
    w *= vocab.idf(idx);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (auto& [idx, w] : weights) w /= norm;
  }
  return to_sparse(weights, vocab.size());
}

}  // namespace darija
