#include "darija/classifier.hpp"

#include "darija/error.hpp"
#include "darija/neural/encode.hpp"
#include "darija/text_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace darija {

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::Raw: return "raw";
    case Condition::PreprocKeepEmoji: return "preproc-keep-emoji";
    case Condition::PreprocDeleteEmoji: return "preproc-delete-emoji";
  }
  return "?";
}

std::optional<Condition> parse_condition(std::string_view s) {
  for (auto c : kAllConditions) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view caption(Condition c) {
  switch (c) {
    case Condition::Raw: return "Results without pre-processing.";
    case Condition::PreprocKeepEmoji: return "Results with pre-processing and with emojis.";
    case Condition::PreprocDeleteEmoji: return "Results with pre-processing and with deleted emojis.";
  }
  return "?";
}

PipelineConfig pipeline_for(Condition c, const Settings& settings) {
  if (c == Condition::Raw) return PipelineConfig::raw();
  auto all_stages = settings;
  all_stages.stages = StageSet{};
  return all_stages.pipeline(c == Condition::PreprocKeepEmoji ? EmojiMode::Keep : EmojiMode::Delete);
}

std::string_view to_string(Classifier c) {
  switch (c) {
    case Classifier::Svm: return "svm";
    case Classifier::Nb: return "nb";
    case Classifier::Knn: return "knn";
    case Classifier::Cnn: return "cnn";
    case Classifier::Lstm: return "lstm";
  }
  return "?";
}

std::string_view column_name(Classifier c) {
  switch (c) {
    case Classifier::Svm: return "SVM";
    case Classifier::Nb: return "NB";
    case Classifier::Knn: return "KNN";
    case Classifier::Cnn: return "CNN";
    case Classifier::Lstm: return "LSTM";
  }
  return "?";
}

std::optional<Classifier> parse_classifier(std::string_view s) {
  for (auto c : kAllClassifiers) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

namespace {

bool is_neural(Classifier c) { return c == Classifier::Cnn || c == Classifier::Lstm; }

std::size_t neural_max_len(const neural::NeuralModel& m) {
  return std::visit([](const auto& model) { return model.config.max_len; }, m);
}

Label majority(std::span<const Label> labels) {
  std::size_t pos = 0;
  for (auto l : labels) pos += l == Label::Positive;
  return 2 * pos > labels.size() ? Label::Positive : Label::Negative;
}

}  // namespace

Label TrainedClassifier::predict(const TokenSequence& doc) const {
  if (const auto* nb = std::get_if<NbModel>(&model)) {
    return predict_nb(*nb, nb_tfidf ? tfidf_vector(doc, vocab) : count_vector(doc, vocab)).label;
  }
  if (const auto* knn = std::get_if<KnnModel>(&model)) return predict_knn(*knn, tfidf_vector(doc, vocab));
  if (const auto* svm = std::get_if<SvmModel>(&model)) return predict_svm(*svm, tfidf_vector(doc, vocab)).label;
  const auto& net = std::get<neural::NeuralModel>(model);
  const auto encoded = neural::encode_doc(doc, vocab, neural_max_len(net));
  if (!neural::accepts(net, encoded)) return fallback;
  return neural::predict_model(net, encoded).label;
}

TrainedClassifier train_classifier(Classifier kind, std::span<const TokenSequence> docs,
                                   std::span<const Label> labels, const Settings& settings) {
  if (docs.size() != labels.size()) throw InvariantError("documents and labels differ in count");
  TrainedClassifier out;
  out.kind = kind;
  out.nb_tfidf = settings.nb_tfidf;
  out.fallback = majority(labels);
  out.vocab = build_vocabulary(docs, is_neural(kind) ? NGramMode::Unigram : settings.ngram, settings.min_df);

  if (is_neural(kind)) {
    const auto max_len = kind == Classifier::Cnn ? settings.cnn.max_len : settings.lstm.max_len;
    std::vector<neural::Example> examples;
    examples.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      examples.push_back({neural::encode_doc(docs[i], out.vocab, max_len), labels[i]});
    }
    auto result = neural::train_model(kind == Classifier::Cnn ? neural::ModelKind::Cnn : neural::ModelKind::BiLstm,
                                      out.vocab.size(), examples, {}, settings.cnn, settings.lstm,
                                      settings.train_config());
    out.model = std::move(result.model);
    return out;
  }

  std::vector<LabeledVector> vectors;
  vectors.reserve(docs.size());
  const bool counts = kind == Classifier::Nb && !settings.nb_tfidf;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    vectors.push_back({counts ? count_vector(docs[i], out.vocab) : tfidf_vector(docs[i], out.vocab), labels[i]});
  }
  switch (kind) {
    case Classifier::Nb: out.model = train_nb(vectors, settings.nb_alpha); break;
    case Classifier::Knn: out.model = train_knn(vectors, settings.knn_k); break;
    case Classifier::Svm: out.model = train_svm(vectors, settings.svm_options()); break;
    default: throw InvariantError("unreachable classifier kind");
  }
  return out;
}

PreparedSplit prepare_split(const Split& split, const PipelineConfig& pipeline) {
  std::vector<LabeledComment> all(split.train.comments().begin(), split.train.comments().end());
  all.insert(all.end(), split.test.comments().begin(), split.test.comments().end());
  std::unordered_map<std::string, Label> label_of;
  for (const auto& c : all) {
    const auto l = c.effective_label();
    if (!l) throw DataError("comment '" + c.id + "' has no label");
    label_of.emplace(c.id, *l);
  }
  std::unordered_set<std::string> train_ids;
  for (const auto& c : split.train.comments()) train_ids.insert(c.id);

  auto result = run_pipeline(Corpus(std::move(all)), pipeline);
  PreparedSplit out;
  out.dropped_empty = result.dropped_empty;
  out.dropped_duplicates = result.dropped_duplicates;
  for (auto& doc : result.docs) {
    const auto label = label_of.at(doc.source_id);
    if (train_ids.contains(doc.source_id)) {
      out.train_docs.push_back(std::move(doc));
      out.train_labels.push_back(label);
    } else {
      out.test_docs.push_back(std::move(doc));
      out.test_labels.push_back(label);
    }
  }
  return out;
}

// -- bundles -----------------------------------------------------------------

namespace {

constexpr std::string_view kBundleMagic = "darija-bundle 1";

std::size_t count_lines(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

void write_bundle(std::ostream& os, const ModelBundle& b) {
  const auto& c = b.classifier;
  const auto pipeline = b.pipeline.canonical();
  os << kBundleMagic << '\n'
     << "classifier " << to_string(c.kind) << '\n'
     << "condition " << to_string(b.condition) << '\n'
     << "nb_features " << (c.nb_tfidf ? "tfidf" : "counts") << '\n'
     << "fallback " << to_string(c.fallback) << '\n'
     << "pipeline " << count_lines(pipeline) << '\n'
     << pipeline;
  c.vocab.write(os);
  std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, neural::NeuralModel>) {
          neural::write_model(os, m);
        } else {
          write_model(os, m);
        }
      },
      c.model);
}

ModelBundle read_bundle(std::istream& is) {
  ModelBundle b;
  auto& c = b.classifier;
  {
    text_io::LineReader in(is);
    if (in.next() != kBundleMagic) in.fail("not a darija model bundle");
    const auto kind = parse_classifier(in.expect("classifier"));
    if (!kind) in.fail("unknown classifier");
    c.kind = *kind;
    const auto condition = parse_condition(in.expect("condition"));
    if (!condition) in.fail("unknown condition");
    b.condition = *condition;
    const auto features = in.expect("nb_features");
    if (features != "counts" && features != "tfidf") in.fail("bad nb_features");
    c.nb_tfidf = features == "tfidf";
    const auto fallback = parse_label(in.expect("fallback"));
    if (!fallback) in.fail("bad fallback label");
    c.fallback = *fallback;
    const auto lines = text_io::parse_size(in.expect("pipeline"));
    std::string text;
    for (std::size_t i = 0; i < lines; ++i) text += in.next() + '\n';
    try {
      b.pipeline = PipelineConfig::from_canonical(text);
    } catch (const ConfigError& e) {
      in.fail(e.what());
    }
  }
  c.vocab = Vocabulary::read(is);
  switch (c.kind) {
    case Classifier::Nb: c.model = read_nb_model(is); break;
    case Classifier::Knn: c.model = read_knn_model(is); break;
    case Classifier::Svm: c.model = read_svm_model(is); break;
    case Classifier::Cnn:
    case Classifier::Lstm: c.model = neural::read_neural_model(is); break;
  }
  return b;
}

}  // namespace darija
