#pragma once

#include "darija/neural/config.hpp"
#include "darija/neural/layers.hpp"

#include <span>

namespace darija::neural {

/// Parallel-branch text CNN:
///   embed -> per filter size s: conv (window s, valid positions n-s+1),
///   bias, ReLU, global max pool -> concat (|sizes|*m) -> FC + ReLU ->
///   dropout -> affine -> softmax.
/// Padding rows take part in the convolution.
template <typename Scalar>
struct CnnParams : ParamSet<Scalar> {
  std::size_t branches = 0;

  static CnnParams zeros(const CnnConfig& cfg, std::size_t vocab_size) {
    CnnParams p;
    p.branches = cfg.filter_sizes.size();
    const auto d = static_cast<Eigen::Index>(cfg.embed_dim);
    const auto m = static_cast<Eigen::Index>(cfg.filters_per_size);
    p.add("embedding", static_cast<Eigen::Index>(vocab_size) + 1, d);
    for (std::size_t b = 0; b < p.branches; ++b) {
      const auto s = static_cast<Eigen::Index>(cfg.filter_sizes[b]);
      p.add("conv" + std::to_string(b) + ".weight", m, s * d);
      p.add("conv" + std::to_string(b) + ".bias", m, 1);
    }
    p.add("fc.weight", static_cast<Eigen::Index>(cfg.fc_dim), m * static_cast<Eigen::Index>(p.branches));
    p.add("fc.bias", static_cast<Eigen::Index>(cfg.fc_dim), 1);
    p.add("out.weight", static_cast<Eigen::Index>(cfg.num_classes), static_cast<Eigen::Index>(cfg.fc_dim));
    p.add("out.bias", static_cast<Eigen::Index>(cfg.num_classes), 1);
    return p;
  }

  template <typename Other>
  CnnParams<Other> cast() const {
    CnnParams<Other> out;
    out.branches = branches;
    this->cast_into(out);
    return out;
  }

  /// Glorot-uniform weights (embedding included), zero biases.
  void initialize(Rng& rng) {
    for (std::size_t i = 0; i < this->tensors.size(); ++i) {
      if (this->tensors[i].cols() == 1 && this->names[i].ends_with(".bias")) {
        this->tensors[i].setZero();
      } else {
        glorot_uniform(this->tensors[i], rng);
      }
    }
  }

  Matrix<Scalar>& embedding() { return this->tensors[0]; }
  const Matrix<Scalar>& embedding() const { return this->tensors[0]; }
  Matrix<Scalar>& conv_weight(std::size_t b) { return this->tensors[1 + 2 * b]; }
  const Matrix<Scalar>& conv_weight(std::size_t b) const { return this->tensors[1 + 2 * b]; }
  Matrix<Scalar>& conv_bias(std::size_t b) { return this->tensors[2 + 2 * b]; }
  const Matrix<Scalar>& conv_bias(std::size_t b) const { return this->tensors[2 + 2 * b]; }
  Matrix<Scalar>& fc_weight() { return this->tensors[1 + 2 * branches]; }
  const Matrix<Scalar>& fc_weight() const { return this->tensors[1 + 2 * branches]; }
  Matrix<Scalar>& fc_bias() { return this->tensors[2 + 2 * branches]; }
  const Matrix<Scalar>& fc_bias() const { return this->tensors[2 + 2 * branches]; }
  Matrix<Scalar>& out_weight() { return this->tensors[3 + 2 * branches]; }
  const Matrix<Scalar>& out_weight() const { return this->tensors[3 + 2 * branches]; }
  Matrix<Scalar>& out_bias() { return this->tensors[4 + 2 * branches]; }
  const Matrix<Scalar>& out_bias() const { return this->tensors[4 + 2 * branches]; }
};

/// Intermediate values kept for backpropagation.
template <typename Scalar>
struct CnnTrace {
  std::vector<int> indices;                     // clipped/padded to n
  Matrix<Scalar> embedded;                      // n x d
  std::vector<Matrix<Scalar>> feature_maps;     // per branch: (n-s+1) x m, pre-activation
  std::vector<std::vector<Eigen::Index>> peak;  // per branch: argmax position per filter
  Vector<Scalar> pooled;                        // |sizes| * m
  Vector<Scalar> fc_pre;
  Vector<Scalar> fc_mask;
  Vector<Scalar> hidden;                        // after ReLU and dropout
  Vector<Scalar> logits;
  Vector<Scalar> probs;
};

/// Forward pass. Inputs longer than max_len are clipped, shorter ones padded
/// with 0. Pass a Dropout with an Rng only in train mode.
template <typename Scalar>
Vector<Scalar> forward_cnn(const CnnParams<Scalar>& p, const CnnConfig& cfg, std::span<const int> indices,
                           const Dropout* dropout = nullptr, CnnTrace<Scalar>* trace = nullptr) {
  const auto n = static_cast<Eigen::Index>(cfg.max_len);
  const auto d = static_cast<Eigen::Index>(cfg.embed_dim);
  const auto m = static_cast<Eigen::Index>(cfg.filters_per_size);

  CnnTrace<Scalar> local;
  CnnTrace<Scalar>& t = trace ? *trace : local;
  t.indices.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < t.indices.size() && i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= p.embedding().rows()) throw DataError("CNN input index out of range");
    t.indices[i] = indices[i];
  }

  t.embedded.resize(n, d);
  for (Eigen::Index r = 0; r < n; ++r) t.embedded.row(r) = p.embedding().row(t.indices[static_cast<std::size_t>(r)]);

  t.pooled.resize(m * static_cast<Eigen::Index>(p.branches));
  t.feature_maps.resize(p.branches);
  t.peak.assign(p.branches, std::vector<Eigen::Index>(static_cast<std::size_t>(m), 0));
  for (std::size_t b = 0; b < p.branches; ++b) {
    const auto s = static_cast<Eigen::Index>(cfg.filter_sizes[b]);
    const auto len = n - s + 1;
    const auto& w = p.conv_weight(b);
    auto& fm = t.feature_maps[b];
    fm.noalias() = t.embedded.middleRows(0, len) * w.middleCols(0, d).transpose();
    for (Eigen::Index j = 1; j < s; ++j) fm.noalias() += t.embedded.middleRows(j, len) * w.middleCols(j * d, d).transpose();
    fm.rowwise() += p.conv_bias(b).col(0).transpose();
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto best = argmax_first(fm.col(k));
      t.peak[b][static_cast<std::size_t>(k)] = best;
      t.pooled(static_cast<Eigen::Index>(b) * m + k) = std::max(Scalar(0), fm(best, k));
    }
  }

  t.fc_pre = p.fc_weight() * t.pooled + p.fc_bias().col(0);
  t.fc_mask = dropout_mask<Scalar>(t.fc_pre.size(), dropout);
  t.hidden = t.fc_pre.cwiseMax(Scalar(0)).cwiseProduct(t.fc_mask);
  t.logits = p.out_weight() * t.hidden + p.out_bias().col(0);
  t.probs = softmax<Scalar>(t.logits);
  return t.probs;
}

/// Accumulates d(loss)/d(params) for loss = -log probs[target] into `grad`
/// and returns the loss. `trace` must come from forward_cnn on `p`.
template <typename Scalar>
Scalar backward_cnn(const CnnParams<Scalar>& p, const CnnConfig& cfg, const CnnTrace<Scalar>& t,
                    Eigen::Index target, CnnParams<Scalar>& grad) {
  const auto d = static_cast<Eigen::Index>(cfg.embed_dim);
  const auto m = static_cast<Eigen::Index>(cfg.filters_per_size);

  Vector<Scalar> dlogits = t.probs;
  dlogits(target) -= Scalar(1);
  grad.out_weight().noalias() += dlogits * t.hidden.transpose();
  grad.out_bias().col(0) += dlogits;

  Vector<Scalar> dfc = (p.out_weight().transpose() * dlogits).cwiseProduct(t.fc_mask);
  for (Eigen::Index i = 0; i < dfc.size(); ++i) {
    if (!(t.fc_pre(i) > Scalar(0))) dfc(i) = Scalar(0);
  }
  grad.fc_weight().noalias() += dfc * t.pooled.transpose();
  grad.fc_bias().col(0) += dfc;
  const Vector<Scalar> dpooled = p.fc_weight().transpose() * dfc;

  for (std::size_t b = 0; b < p.branches; ++b) {
    const auto s = static_cast<Eigen::Index>(cfg.filter_sizes[b]);
    const auto& w = p.conv_weight(b);
    auto& gw = grad.conv_weight(b);
    auto& gb = grad.conv_bias(b);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto pos = t.peak[b][static_cast<std::size_t>(k)];
      if (!(t.feature_maps[b](pos, k) > Scalar(0))) continue;
      const Scalar g = dpooled(static_cast<Eigen::Index>(b) * m + k);
      gb(k, 0) += g;
      for (Eigen::Index j = 0; j < s; ++j) {
        gw.row(k).segment(j * d, d) += g * t.embedded.row(pos + j);
        grad.embedding().row(t.indices[static_cast<std::size_t>(pos + j)]) += g * w.row(k).segment(j * d, d);
      }
    }
  }
  return cross_entropy<Scalar>(t.logits, target);
}

}  // namespace darija::neural
