#pragma once

#include "darija/classic.hpp"
#include "darija/features.hpp"
#include "darija/neural/model.hpp"
#include "darija/preprocess.hpp"
#include "darija/settings.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace darija {

/// The three preprocessing conditions of the evaluation grid.
enum class Condition : std::uint8_t { Raw, PreprocKeepEmoji, PreprocDeleteEmoji };
inline constexpr std::array<Condition, 3> kAllConditions{Condition::Raw, Condition::PreprocKeepEmoji,
                                                         Condition::PreprocDeleteEmoji};
std::string_view to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view s);
/// Table caption for the condition.
std::string_view caption(Condition c);

/// Raw is tokenize-only; the other two run every stage with the configured
/// stop-word lists.
PipelineConfig pipeline_for(Condition c, const Settings& settings);

/// Classifiers in report column order.
enum class Classifier : std::uint8_t { Svm, Nb, Knn, Cnn, Lstm };
inline constexpr std::array<Classifier, 5> kAllClassifiers{Classifier::Svm, Classifier::Nb, Classifier::Knn,
                                                           Classifier::Cnn, Classifier::Lstm};
std::string_view to_string(Classifier c);
/// Column header: SVM, NB, KNN, CNN, LSTM.
std::string_view column_name(Classifier c);
std::optional<Classifier> parse_classifier(std::string_view s);

/// A fitted classifier together with the vocabulary it reads.
struct TrainedClassifier {
  Classifier kind = Classifier::Svm;
  Vocabulary vocab;
  bool nb_tfidf = false;
  /// Prediction for documents the model cannot read (BiLSTM, all-OOV).
  Label fallback = Label::Negative;
  std::variant<NbModel, KnnModel, SvmModel, neural::NeuralModel> model;

  Label predict(const TokenSequence& doc) const;
};

/// Builds the vocabulary from `docs` (unigrams for the neural models, the
/// configured n-gram mode otherwise) and fits the classifier.
TrainedClassifier train_classifier(Classifier kind, std::span<const TokenSequence> docs,
                                   std::span<const Label> labels, const Settings& settings);

/// Training and test documents of one split after a pipeline.
struct PreparedSplit {
  std::vector<TokenSequence> train_docs;
  std::vector<Label> train_labels;
  std::vector<TokenSequence> test_docs;
  std::vector<Label> test_labels;
  std::size_t dropped_empty = 0;
  std::size_t dropped_duplicates = 0;
};

/// Runs the pipeline over train followed by test, so deduplication also
/// removes test comments that repeat a training comment, then separates the
/// survivors again.
PreparedSplit prepare_split(const Split& split, const PipelineConfig& pipeline);

/// A trained classifier plus the preprocessing it expects:
///   darija-bundle 1 / condition / pipeline <lines> / vocabulary / model.
struct ModelBundle {
  Condition condition = Condition::PreprocDeleteEmoji;
  PipelineConfig pipeline;
  TrainedClassifier classifier;
};

void write_bundle(std::ostream& os, const ModelBundle& bundle);
ModelBundle read_bundle(std::istream& is);

}  // namespace darija
