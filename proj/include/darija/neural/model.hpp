#pragma once

#include "darija/corpus.hpp"
#include "darija/neural/cnn.hpp"
#include "darija/neural/config.hpp"
#include "darija/neural/encode.hpp"
#include "darija/neural/lstm.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace darija::neural {

enum class ModelKind { Cnn, BiLstm };
std::string_view to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view s);

struct CnnModel {
  CnnConfig config;
  CnnParams<double> params;

  CnnModel(CnnConfig cfg, std::size_t vocab_size)
      : config(std::move(cfg)), params(CnnParams<double>::zeros(config, vocab_size)) {}
};

struct BiLstmModel {
  LstmConfig config;
  BiLstmParams<double> params;

  BiLstmModel(LstmConfig cfg, std::size_t vocab_size)
      : config(std::move(cfg)), params(BiLstmParams<double>::zeros(config, vocab_size)) {}
};

using NeuralModel = std::variant<CnnModel, BiLstmModel>;

inline std::size_t vocab_size(const CnnModel& m) { return static_cast<std::size_t>(m.params.embedding().rows()) - 1; }
inline std::size_t vocab_size(const BiLstmModel& m) { return static_cast<std::size_t>(m.params.embedding().rows()) - 1; }

/// The CNN reads padding, so every document is usable; the BiLSTM needs at
/// least one in-vocabulary token.
inline bool accepts(const CnnModel&, const EncodedDoc&) { return true; }
inline bool accepts(const BiLstmModel&, const EncodedDoc& doc) { return !doc.all_oov(); }

inline Eigen::VectorXd predict_proba(const CnnModel& m, const EncodedDoc& doc) {
  return forward_cnn(m.params, m.config, doc.indices);
}
inline Eigen::VectorXd predict_proba(const BiLstmModel& m, const EncodedDoc& doc) {
  return forward_bilstm(m.params, m.config, doc.indices, doc.true_length);
}

/// Forward (with dropout when `dropout` is active) and backward for one
/// example; the gradient is added into `grad`. Returns the loss and writes
/// the probabilities to `probs` when given.
double accumulate_gradient(const CnnModel& m, const EncodedDoc& doc, Eigen::Index target, const Dropout* dropout,
                           CnnParams<double>& grad, Eigen::VectorXd* probs = nullptr);
double accumulate_gradient(const BiLstmModel& m, const EncodedDoc& doc, Eigen::Index target, const Dropout* dropout,
                           BiLstmParams<double>& grad, Eigen::VectorXd* probs = nullptr);

/// Cross-entropy in inference mode.
double example_loss(const CnnModel& m, const EncodedDoc& doc, Eigen::Index target);
double example_loss(const BiLstmModel& m, const EncodedDoc& doc, Eigen::Index target);

struct NeuralPrediction {
  Label label = Label::Negative;
  Eigen::Index class_index = 0;
  Eigen::VectorXd probs;
};

/// Class 0 is Negative and class 1 Positive. With a third output unit the
/// label is decided between the first two. Ties go to the lower index.
NeuralPrediction to_prediction(Eigen::VectorXd probs);

template <typename Model>
NeuralPrediction predict_model(const Model& m, const EncodedDoc& doc) {
  return to_prediction(predict_proba(m, doc));
}
NeuralPrediction predict_model(const NeuralModel& m, const EncodedDoc& doc);
bool accepts(const NeuralModel& m, const EncodedDoc& doc);

// ---------------------------------------------------------------------------
// Training

struct Example {
  EncodedDoc doc;
  Label label = Label::Negative;
};

struct EpochStats {
  std::size_t epoch = 0;
  /// Mean loss and accuracy over the epoch's training passes (dropout on).
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> valid_loss;
  std::optional<double> valid_accuracy;

  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

using TrainHistory = std::vector<EpochStats>;

/// Adam over mean minibatch cross-entropy. Parameters are Glorot-initialized
/// from cfg.seed; the same generator then drives per-epoch shuffles and
/// dropout masks, so a seed fixes the whole run. Examples the model does not
/// accept are skipped.
template <typename Model>
TrainHistory train_model(Model& model, std::span<const Example> train, std::span<const Example> valid,
                         const TrainConfig& cfg);

struct TrainResult {
  NeuralModel model;
  TrainHistory history;
};

TrainResult train_model(ModelKind kind, std::size_t vocab_size, std::span<const Example> train,
                        std::span<const Example> valid, const CnnConfig& cnn, const LstmConfig& lstm,
                        const TrainConfig& cfg);

// ---------------------------------------------------------------------------
// Gradient verification

struct GradientComparison {
  double max_relative_error = 0.0;
  std::string tensor;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

/// Per-entry |a - n| / max(|a|, |n|, 1e-12), maximized over all entries.
GradientComparison compare_gradients(const ParamSet<double>& analytic, const ParamSet<double>& numeric);

template <typename Model>
ParamSet<double> analytic_gradient(const Model& m, const EncodedDoc& doc, Eigen::Index target) {
  auto grad = m.params;
  grad.set_zero();
  accumulate_gradient(m, doc, target, nullptr, grad);
  return grad;
}

/// Inference-mode loss at an arbitrary scalar precision.
template <typename Scalar>
Scalar loss_at(const CnnParams<Scalar>& p, const CnnConfig& cfg, const EncodedDoc& doc, Eigen::Index target) {
  CnnTrace<Scalar> trace;
  forward_cnn(p, cfg, doc.indices, nullptr, &trace);
  return cross_entropy<Scalar>(trace.logits, target);
}

template <typename Scalar>
Scalar loss_at(const BiLstmParams<Scalar>& p, const LstmConfig& cfg, const EncodedDoc& doc, Eigen::Index target) {
  BiLstmTrace<Scalar> trace;
  forward_bilstm(p, cfg, doc.indices, doc.true_length, nullptr, &trace);
  return cross_entropy<Scalar>(trace.logits, target);
}

/// Central differences (f(x + eps) - f(x - eps)) / (2 eps) per parameter.
/// The perturbed losses are evaluated in `OracleScalar`; the default
/// (x87 extended precision) keeps round-off in the loss well below the
/// smallest gradients of the tiny test models.
template <typename OracleScalar = long double, typename Model>
ParamSet<double> numeric_gradient(const Model& m, const EncodedDoc& doc, Eigen::Index target, double eps) {
  auto params = m.params.template cast<OracleScalar>();
  ParamSet<double> grad = m.params.zeros_like();
  const auto step = static_cast<OracleScalar>(eps);
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    auto& w = params.tensors[t];
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const OracleScalar saved = w.data()[i];
      w.data()[i] = saved + step;
      const OracleScalar up = loss_at(params, m.config, doc, target);
      w.data()[i] = saved - step;
      const OracleScalar down = loss_at(params, m.config, doc, target);
      w.data()[i] = saved;
      grad.tensors[t].data()[i] = static_cast<double>((up - down) / (OracleScalar(2) * step));
    }
  }
  return grad;
}

template <typename OracleScalar = long double, typename Model>
GradientComparison gradient_check(const Model& m, const EncodedDoc& doc, Eigen::Index target, double eps = 1e-5) {
  return compare_gradients(analytic_gradient(m, doc, target), numeric_gradient<OracleScalar>(m, doc, target, eps));
}

// ---------------------------------------------------------------------------
// Serialization: "darija-params 1" envelope with the config line and every
// named tensor in row-major decimal form.

void write_model(std::ostream& os, const NeuralModel& m);
NeuralModel read_neural_model(std::istream& is);

}  // namespace darija::neural
