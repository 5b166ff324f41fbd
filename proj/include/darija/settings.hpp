#pragma once

#include "darija/classic.hpp"
#include "darija/corpus.hpp"
#include "darija/features.hpp"
#include "darija/neural/config.hpp"
#include "darija/preprocess.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace darija {

/// Every tunable of the pipeline in one place. Text form is one `key=value`
/// per line; blank lines and lines starting with '#' are ignored.
///
///   seed, train_fraction, ngram, min_df, emoji_mode,
///   stopwords_arabic, stopwords_latin (file paths),
///   stage.{clean,tokenize,normalize,emoji,stopwords,dedup} (on|off),
///   nb.alpha, nb.features (counts|tfidf), knn.k, svm.lambda, svm.epochs,
///   cnn.{filter_sizes,filters,max_len,embed_dim,fc_dim,dropout,num_classes},
///   lstm.{hidden,max_len,embed_dim,fc_dim,dropout,num_classes},
///   train.{learning_rate,beta1,beta2,epsilon,batch_size,epochs}
///
/// `seed` drives the split, SVM shuffling and neural training alike.
struct Settings {
  std::uint64_t seed = 42;
  Fraction train_fraction{};
  NGramMode ngram = NGramMode::Unigram;
  std::size_t min_df = 1;

  EmojiMode emoji_mode = EmojiMode::Keep;
  StageSet stages{};
  std::optional<std::filesystem::path> stopwords_arabic;
  std::optional<std::filesystem::path> stopwords_latin;

  double nb_alpha = 1.0;
  bool nb_tfidf = false;
  std::size_t knn_k = 5;
  double svm_lambda = 1e-4;
  std::size_t svm_epochs = 20;

  neural::CnnConfig cnn{};
  neural::LstmConfig lstm{};
  neural::TrainConfig train{};

  /// Throws ConfigError for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  /// Applies `key=value` lines on top of the current values.
  void apply(std::string_view text);
  void apply_file(const std::filesystem::path& path);

  /// Throws ConfigError on an inconsistent combination.
  void validate() const;

  SplitSpec split_spec() const { return {train_fraction, seed, true}; }
  SvmOptions svm_options() const { return {svm_lambda, svm_epochs, seed}; }
  neural::TrainConfig train_config() const;

  /// Full pipeline with the configured stop-word files (bundled lists when
  /// unset), stages and the given emoji mode.
  PipelineConfig pipeline(EmojiMode mode) const;
  PipelineConfig pipeline() const { return pipeline(emoji_mode); }

  /// Every key in a fixed order; applying it to defaults reproduces *this.
  std::string canonical() const;
};

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fingerprint(std::string_view text);

}  // namespace darija
