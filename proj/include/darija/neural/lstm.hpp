#pragma once

#include "darija/neural/config.hpp"
#include "darija/neural/layers.hpp"

#include <algorithm>
#include <array>
#include <span>

namespace darija::neural {

/// Bidirectional LSTM classifier:
///   embed -> forward LSTM over 1..L and backward LSTM over L..1 (L = true
///   length) -> concat final hidden states (2h) -> dropout -> FC + ReLU ->
///   dropout -> affine -> softmax.
/// Gate rows are stacked [input; forget; candidate; output]:
///   a = W x + U h_prev + b
///   i = sig(a_i), f = sig(a_f), g = tanh(a_g), o = sig(a_o)
///   c = f * c_prev + i * g,  h = o * tanh(c)
template <typename Scalar>
struct BiLstmParams : ParamSet<Scalar> {
  static constexpr std::size_t kForward = 0;
  static constexpr std::size_t kBackward = 1;

  static BiLstmParams zeros(const LstmConfig& cfg, std::size_t vocab_size) {
    BiLstmParams p;
    const auto d = static_cast<Eigen::Index>(cfg.embed_dim);
    const auto h = static_cast<Eigen::Index>(cfg.hidden);
    p.add("embedding", static_cast<Eigen::Index>(vocab_size) + 1, d);
    for (const char* dir : {"fwd", "bwd"}) {
      p.add(std::string(dir) + ".input_weight", 4 * h, d);
      p.add(std::string(dir) + ".recurrent_weight", 4 * h, h);
      p.add(std::string(dir) + ".bias", 4 * h, 1);
    }
    p.add("fc.weight", static_cast<Eigen::Index>(cfg.fc_dim), 2 * h);
    p.add("fc.bias", static_cast<Eigen::Index>(cfg.fc_dim), 1);
    p.add("out.weight", static_cast<Eigen::Index>(cfg.num_classes), static_cast<Eigen::Index>(cfg.fc_dim));
    p.add("out.bias", static_cast<Eigen::Index>(cfg.num_classes), 1);
    return p;
  }

  template <typename Other>
  BiLstmParams<Other> cast() const {
    BiLstmParams<Other> out;
    this->cast_into(out);
    return out;
  }

  /// Glorot-uniform weights (embedding included), zero biases.
  void initialize(Rng& rng) {
    for (std::size_t i = 0; i < this->tensors.size(); ++i) {
      if (this->names[i].ends_with(".bias")) {
        this->tensors[i].setZero();
      } else {
        glorot_uniform(this->tensors[i], rng);
      }
    }
  }

  Matrix<Scalar>& embedding() { return this->tensors[0]; }
  const Matrix<Scalar>& embedding() const { return this->tensors[0]; }
  Matrix<Scalar>& input_weight(std::size_t dir) { return this->tensors[1 + 3 * dir]; }
  const Matrix<Scalar>& input_weight(std::size_t dir) const { return this->tensors[1 + 3 * dir]; }
  Matrix<Scalar>& recurrent_weight(std::size_t dir) { return this->tensors[2 + 3 * dir]; }
  const Matrix<Scalar>& recurrent_weight(std::size_t dir) const { return this->tensors[2 + 3 * dir]; }
  Matrix<Scalar>& gate_bias(std::size_t dir) { return this->tensors[3 + 3 * dir]; }
  const Matrix<Scalar>& gate_bias(std::size_t dir) const { return this->tensors[3 + 3 * dir]; }
  Matrix<Scalar>& fc_weight() { return this->tensors[7]; }
  const Matrix<Scalar>& fc_weight() const { return this->tensors[7]; }
  Matrix<Scalar>& fc_bias() { return this->tensors[8]; }
  const Matrix<Scalar>& fc_bias() const { return this->tensors[8]; }
  Matrix<Scalar>& out_weight() { return this->tensors[9]; }
  const Matrix<Scalar>& out_weight() const { return this->tensors[9]; }
  Matrix<Scalar>& out_bias() { return this->tensors[10]; }
  const Matrix<Scalar>& out_bias() const { return this->tensors[10]; }
};

/// One direction's per-step state, in processing order.
template <typename Scalar>
struct LstmStepTrace {
  int token = 0;
  Vector<Scalar> i, f, g, o;
  Vector<Scalar> c, tanh_c, h;
  Vector<Scalar> c_prev, h_prev;
};

template <typename Scalar>
struct BiLstmTrace {
  std::array<std::vector<LstmStepTrace<Scalar>>, 2> steps;
  Vector<Scalar> concat;       // 2h, before dropout
  Vector<Scalar> concat_mask;
  Vector<Scalar> fc_in;        // concat after dropout
  Vector<Scalar> fc_pre;
  Vector<Scalar> fc_mask;
  Vector<Scalar> hidden;
  Vector<Scalar> logits;
  Vector<Scalar> probs;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> run_direction(const BiLstmParams<Scalar>& p, std::size_t dir, std::span<const int> tokens,
                             std::vector<LstmStepTrace<Scalar>>& steps) {
  const auto& w = p.input_weight(dir);
  const auto& u = p.recurrent_weight(dir);
  const auto h = u.cols();
  Vector<Scalar> hs = Vector<Scalar>::Zero(h);
  Vector<Scalar> cs = Vector<Scalar>::Zero(h);
  steps.clear();
  steps.reserve(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const int tok = dir == BiLstmParams<Scalar>::kForward ? tokens[k] : tokens[tokens.size() - 1 - k];
    LstmStepTrace<Scalar> st;
    st.token = tok;
    st.h_prev = hs;
    st.c_prev = cs;
    const Vector<Scalar> a = w * p.embedding().row(tok).transpose() + u * hs + p.gate_bias(dir).col(0);
    st.i = a.segment(0, h).unaryExpr([](Scalar x) { return sigmoid(x); });
    st.f = a.segment(h, h).unaryExpr([](Scalar x) { return sigmoid(x); });
    st.g = a.segment(2 * h, h).array().tanh();
    st.o = a.segment(3 * h, h).unaryExpr([](Scalar x) { return sigmoid(x); });
    st.c = st.f.cwiseProduct(cs) + st.i.cwiseProduct(st.g);
    st.tanh_c = st.c.array().tanh();
    st.h = st.o.cwiseProduct(st.tanh_c);
    hs = st.h;
    cs = st.c;
    steps.push_back(std::move(st));
  }
  return hs;
}

template <typename Scalar>
void backprop_direction(const BiLstmParams<Scalar>& p, std::size_t dir, const std::vector<LstmStepTrace<Scalar>>& steps,
                        Vector<Scalar> dh, BiLstmParams<Scalar>& grad) {
  const auto& w = p.input_weight(dir);
  const auto& u = p.recurrent_weight(dir);
  const auto h = u.cols();
  Vector<Scalar> dc = Vector<Scalar>::Zero(h);
  Vector<Scalar> da(4 * h);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const auto& st = *it;
    const Vector<Scalar> ones = Vector<Scalar>::Ones(h);
    dc += dh.cwiseProduct(st.o).cwiseProduct(ones - st.tanh_c.cwiseAbs2());
    da.segment(0, h) = dc.cwiseProduct(st.g).cwiseProduct(st.i).cwiseProduct(ones - st.i);
    da.segment(h, h) = dc.cwiseProduct(st.c_prev).cwiseProduct(st.f).cwiseProduct(ones - st.f);
    da.segment(2 * h, h) = dc.cwiseProduct(st.i).cwiseProduct(ones - st.g.cwiseAbs2());
    da.segment(3 * h, h) = dh.cwiseProduct(st.tanh_c).cwiseProduct(st.o).cwiseProduct(ones - st.o);
    grad.input_weight(dir).noalias() += da * p.embedding().row(st.token);
    grad.recurrent_weight(dir).noalias() += da * st.h_prev.transpose();
    grad.gate_bias(dir).col(0) += da;
    grad.embedding().row(st.token).noalias() += (w.transpose() * da).transpose();
    dh = u.transpose() * da;
    dc = dc.cwiseProduct(st.f);
  }
}

}  // namespace detail

/// Forward pass over the first `true_length` indices (clipped to max_len).
/// Throws DataError when true_length is 0.
template <typename Scalar>
Vector<Scalar> forward_bilstm(const BiLstmParams<Scalar>& p, const LstmConfig& cfg, std::span<const int> indices,
                              std::size_t true_length, const Dropout* dropout = nullptr,
                              BiLstmTrace<Scalar>* trace = nullptr) {
  if (true_length == 0) throw DataError("BiLSTM input has no in-vocabulary tokens");
  const auto len = std::min({true_length, cfg.max_len, indices.size()});
  const auto tokens = indices.first(len);
  for (int tok : tokens) {
    if (tok < 0 || tok >= p.embedding().rows()) throw DataError("BiLSTM input index out of range");
  }
  BiLstmTrace<Scalar> local;
  BiLstmTrace<Scalar>& t = trace ? *trace : local;
  const auto h = static_cast<Eigen::Index>(cfg.hidden);
  t.concat.resize(2 * h);
  t.concat.head(h) = detail::run_direction(p, BiLstmParams<Scalar>::kForward, tokens, t.steps[0]);
  t.concat.tail(h) = detail::run_direction(p, BiLstmParams<Scalar>::kBackward, tokens, t.steps[1]);
  t.concat_mask = dropout_mask<Scalar>(2 * h, dropout);
  t.fc_in = t.concat.cwiseProduct(t.concat_mask);
  t.fc_pre = p.fc_weight() * t.fc_in + p.fc_bias().col(0);
  t.fc_mask = dropout_mask<Scalar>(t.fc_pre.size(), dropout);
  t.hidden = t.fc_pre.cwiseMax(Scalar(0)).cwiseProduct(t.fc_mask);
  t.logits = p.out_weight() * t.hidden + p.out_bias().col(0);
  t.probs = softmax<Scalar>(t.logits);
  return t.probs;
}

/// Accumulates the cross-entropy gradient into `grad`; returns the loss.
template <typename Scalar>
Scalar backward_bilstm(const BiLstmParams<Scalar>& p, const LstmConfig& cfg, const BiLstmTrace<Scalar>& t,
                       Eigen::Index target, BiLstmParams<Scalar>& grad) {
  const auto h = static_cast<Eigen::Index>(cfg.hidden);
  Vector<Scalar> dlogits = t.probs;
  dlogits(target) -= Scalar(1);
  grad.out_weight().noalias() += dlogits * t.hidden.transpose();
  grad.out_bias().col(0) += dlogits;

  Vector<Scalar> dfc = (p.out_weight().transpose() * dlogits).cwiseProduct(t.fc_mask);
  for (Eigen::Index i = 0; i < dfc.size(); ++i) {
    if (!(t.fc_pre(i) > Scalar(0))) dfc(i) = Scalar(0);
  }
  grad.fc_weight().noalias() += dfc * t.fc_in.transpose();
  grad.fc_bias().col(0) += dfc;
  const Vector<Scalar> dconcat = (p.fc_weight().transpose() * dfc).cwiseProduct(t.concat_mask);

  detail::backprop_direction(p, BiLstmParams<Scalar>::kForward, t.steps[0], Vector<Scalar>(dconcat.head(h)), grad);
  detail::backprop_direction(p, BiLstmParams<Scalar>::kBackward, t.steps[1], Vector<Scalar>(dconcat.tail(h)), grad);
  return cross_entropy<Scalar>(t.logits, target);
}

}  // namespace darija::neural
