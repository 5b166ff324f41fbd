#include "darija/neural/model.hpp"

#include "darija/error.hpp"
#include "darija/text_io.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace darija::neural {

namespace {

constexpr std::string_view kParamsMagic = "darija-params 1";

template <typename Scalar>
struct AdamState {
  ParamSet<Scalar> first;
  ParamSet<Scalar> second;
  std::uint64_t step = 0;
};

template <typename Scalar>
void adam_update(ParamSet<Scalar>& params, const ParamSet<Scalar>& grad, AdamState<Scalar>& state,
                 const TrainConfig& cfg) {
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    auto& m = state.first.tensors[t];
    auto& v = state.second.tensors[t];
    const auto& g = grad.tensors[t];
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseAbs2();
    params.tensors[t].array() -=
        cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
  }
}

template <typename Model>
std::pair<double, double> evaluate(const Model& model, std::span<const Example> examples) {
  double loss = 0.0;
  std::size_t correct = 0, used = 0;
  for (const auto& ex : examples) {
    if (!accepts(model, ex.doc)) continue;
    const auto target = static_cast<Eigen::Index>(index_of(ex.label));
    loss += example_loss(model, ex.doc, target);
    correct += predict_model(model, ex.doc).label == ex.label;
    ++used;
  }
  if (used == 0) return {0.0, 0.0};
  return {loss / static_cast<double>(used), static_cast<double>(correct) / static_cast<double>(used)};
}

CnnConfig parse_cnn_config(const std::string& line) {
  CnnConfig c;
  c.filter_sizes.clear();
  for (auto field : text_io::split_fields(line)) {
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw DataError("bad config field '" + std::string(field) + "'");
    const auto key = field.substr(0, eq), val = field.substr(eq + 1);
    if (key == "filter_sizes") {
      std::size_t pos = 0;
      while (pos <= val.size()) {
        auto comma = val.find(',', pos);
        if (comma == std::string_view::npos) comma = val.size();
        c.filter_sizes.push_back(text_io::parse_size(val.substr(pos, comma - pos)));
        pos = comma + 1;
      }
    } else if (key == "filters") {
      c.filters_per_size = text_io::parse_size(val);
    } else if (key == "max_len") {
      c.max_len = text_io::parse_size(val);
    } else if (key == "embed_dim") {
      c.embed_dim = text_io::parse_size(val);
    } else if (key == "fc_dim") {
      c.fc_dim = text_io::parse_size(val);
    } else if (key == "dropout") {
      c.dropout = text_io::parse_double(val);
    } else if (key == "classes") {
      c.num_classes = text_io::parse_size(val);
    }
  }
  c.validate();
  return c;
}

LstmConfig parse_lstm_config(const std::string& line) {
  LstmConfig c;
  for (auto field : text_io::split_fields(line)) {
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw DataError("bad config field '" + std::string(field) + "'");
    const auto key = field.substr(0, eq), val = field.substr(eq + 1);
    if (key == "hidden") {
      c.hidden = text_io::parse_size(val);
    } else if (key == "max_len") {
      c.max_len = text_io::parse_size(val);
    } else if (key == "embed_dim") {
      c.embed_dim = text_io::parse_size(val);
    } else if (key == "fc_dim") {
      c.fc_dim = text_io::parse_size(val);
    } else if (key == "dropout") {
      c.dropout = text_io::parse_double(val);
    } else if (key == "classes") {
      c.num_classes = text_io::parse_size(val);
    }
  }
  c.validate();
  return c;
}

template <typename Params>
void read_tensors(text_io::LineReader& in, Params& params) {
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    auto value = text_io::read_tensor(in, params.names[t]);
    auto& dst = params.tensors[t];
    if (dst.cols() == 1 && value.rows() == dst.rows() && value.cols() == 1) {
      dst = std::move(value);
    } else if (value.rows() == dst.rows() && value.cols() == dst.cols()) {
      dst = std::move(value);
    } else {
      in.fail("tensor '" + params.names[t] + "' has the wrong shape");
    }
  }
}

}  // namespace

std::string_view to_string(ModelKind k) { return k == ModelKind::Cnn ? "cnn" : "lstm"; }

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  if (s == "cnn") return ModelKind::Cnn;
  if (s == "lstm" || s == "bilstm") return ModelKind::BiLstm;
  return std::nullopt;
}

double accumulate_gradient(const CnnModel& m, const EncodedDoc& doc, Eigen::Index target, const Dropout* dropout,
                           CnnParams<double>& grad, Eigen::VectorXd* probs) {
  CnnTrace<double> trace;
  forward_cnn(m.params, m.config, doc.indices, dropout, &trace);
  if (probs) *probs = trace.probs;
  return backward_cnn(m.params, m.config, trace, target, grad);
}

double accumulate_gradient(const BiLstmModel& m, const EncodedDoc& doc, Eigen::Index target, const Dropout* dropout,
                           BiLstmParams<double>& grad, Eigen::VectorXd* probs) {
  BiLstmTrace<double> trace;
  forward_bilstm(m.params, m.config, doc.indices, doc.true_length, dropout, &trace);
  if (probs) *probs = trace.probs;
  return backward_bilstm(m.params, m.config, trace, target, grad);
}

double example_loss(const CnnModel& m, const EncodedDoc& doc, Eigen::Index target) {
  CnnTrace<double> trace;
  forward_cnn(m.params, m.config, doc.indices, nullptr, &trace);
  return cross_entropy<double>(trace.logits, target);
}

double example_loss(const BiLstmModel& m, const EncodedDoc& doc, Eigen::Index target) {
  BiLstmTrace<double> trace;
  forward_bilstm(m.params, m.config, doc.indices, doc.true_length, nullptr, &trace);
  return cross_entropy<double>(trace.logits, target);
}

NeuralPrediction to_prediction(Eigen::VectorXd probs) {
  NeuralPrediction p;
  p.class_index = argmax_first(probs);
  p.label = probs(1) > probs(0) ? Label::Positive : Label::Negative;
  p.probs = std::move(probs);
  return p;
}

NeuralPrediction predict_model(const NeuralModel& m, const EncodedDoc& doc) {
  return std::visit([&](const auto& model) { return predict_model(model, doc); }, m);
}

bool accepts(const NeuralModel& m, const EncodedDoc& doc) {
  return std::visit([&](const auto& model) { return accepts(model, doc); }, m);
}

template <typename Model>
TrainHistory train_model(Model& model, std::span<const Example> train, std::span<const Example> valid,
                         const TrainConfig& cfg) {
  cfg.validate();
  model.config.validate();
  if (model.config.num_classes < kNumLabels) throw ConfigError("model needs an output unit per label");

  Rng rng(cfg.seed);
  model.params.initialize(rng);
  AdamState<double> adam{model.params.zeros_like(), model.params.zeros_like(), 0};
  auto grad = model.params;
  grad.set_zero();

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (accepts(model, train[i].doc)) order.push_back(i);
  }
  if (order.empty()) throw DataError("no trainable examples");

  const Dropout dropout{model.config.dropout, &rng};
  TrainHistory history;
  Eigen::VectorXd probs;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const auto end = std::min(order.size(), start + cfg.batch_size);
      grad.set_zero();
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = train[order[k]];
        const auto target = static_cast<Eigen::Index>(index_of(ex.label));
        loss_sum += accumulate_gradient(model, ex.doc, target, &dropout, grad, &probs);
        correct += to_prediction(probs).label == ex.label;
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto& g : grad.tensors) g *= scale;
      adam_update(model.params, grad, adam, cfg);
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(order.size());
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    if (!valid.empty()) {
      auto [loss, acc] = evaluate(model, valid);
      stats.valid_loss = loss;
      stats.valid_accuracy = acc;
    }
    history.push_back(stats);
  }
  return history;
}

template TrainHistory train_model<CnnModel>(CnnModel&, std::span<const Example>, std::span<const Example>,
                                            const TrainConfig&);
template TrainHistory train_model<BiLstmModel>(BiLstmModel&, std::span<const Example>, std::span<const Example>,
                                               const TrainConfig&);

TrainResult train_model(ModelKind kind, std::size_t vocab_size, std::span<const Example> train,
                        std::span<const Example> valid, const CnnConfig& cnn, const LstmConfig& lstm,
                        const TrainConfig& cfg) {
  cfg.validate();
  if (kind == ModelKind::Cnn) {
    cnn.validate();
    CnnModel model(cnn, vocab_size);
    auto history = train_model(model, train, valid, cfg);
    return {std::move(model), std::move(history)};
  }
  lstm.validate();
  BiLstmModel model(lstm, vocab_size);
  auto history = train_model(model, train, valid, cfg);
  return {std::move(model), std::move(history)};
}

GradientComparison compare_gradients(const ParamSet<double>& analytic, const ParamSet<double>& numeric) {
  if (analytic.tensors.size() != numeric.tensors.size()) throw InvariantError("gradient sets differ in layout");
  GradientComparison worst;
  worst.max_relative_error = -1.0;
  for (std::size_t t = 0; t < analytic.tensors.size(); ++t) {
    const auto& a = analytic.tensors[t];
    const auto& n = numeric.tensors[t];
    if (a.rows() != n.rows() || a.cols() != n.cols()) throw InvariantError("gradient tensors differ in shape");
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        const double av = a(r, c), nv = n(r, c);
        const double rel = std::abs(av - nv) / std::max({std::abs(av), std::abs(nv), 1e-12});
        ++worst.checked;
        if (rel > worst.max_relative_error) {
          worst.max_relative_error = rel;
          worst.tensor = analytic.names[t];
          worst.row = r;
          worst.col = c;
          worst.analytic = av;
          worst.numeric = nv;
        }
      }
    }
  }
  worst.max_relative_error = std::max(worst.max_relative_error, 0.0);
  return worst;
}

void write_model(std::ostream& os, const NeuralModel& m) {
  os << kParamsMagic << '\n';
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        os << "kind " << (std::is_same_v<T, CnnModel> ? "cnn" : "lstm") << '\n';
        os << "config " << model.config.canonical() << '\n';
        os << "vocab_size " << vocab_size(model) << '\n';
        for (std::size_t t = 0; t < model.params.tensors.size(); ++t) {
          text_io::write_tensor(os, model.params.names[t], model.params.tensors[t]);
        }
      },
      m);
  os << "end\n";
}

NeuralModel read_neural_model(std::istream& is) {
  text_io::LineReader in(is);
  if (in.next() != kParamsMagic) in.fail("not a darija neural parameter file");
  const auto kind = parse_model_kind(in.expect("kind"));
  if (!kind) in.fail("unknown neural model kind");
  const auto config_line = in.expect("config");
  const auto vocab = text_io::parse_size(in.expect("vocab_size"));
  if (*kind == ModelKind::Cnn) {
    CnnModel model(parse_cnn_config(config_line), vocab);
    read_tensors(in, model.params);
    in.expect("end");
    return model;
  }
  BiLstmModel model(parse_lstm_config(config_line), vocab);
  read_tensors(in, model.params);
  in.expect("end");
  return model;
}

}  // namespace darija::neural
