#pragma once

#include "darija/error.hpp"
#include "darija/rng.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

namespace darija::neural {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Named tensors in a fixed order. Models index into `tensors`; training,
/// gradient checking and serialization walk the list generically.
template <typename Scalar>
struct ParamSet {
  std::vector<std::string> names;
  std::vector<Matrix<Scalar>> tensors;

  std::size_t num_tensors() const { return tensors.size(); }

  std::size_t num_scalars() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += static_cast<std::size_t>(t.size());
    return n;
  }

  void add(std::string name, Eigen::Index rows, Eigen::Index cols) {
    names.push_back(std::move(name));
    tensors.push_back(Matrix<Scalar>::Zero(rows, cols));
  }

  ParamSet zeros_like() const {
    ParamSet z;
    z.names = names;
    for (const auto& t : tensors) z.tensors.push_back(Matrix<Scalar>::Zero(t.rows(), t.cols()));
    return z;
  }

  void set_zero() {
    for (auto& t : tensors) t.setZero();
  }

  /// Copies the tensors into `out` converted to another scalar type.
  template <typename Other>
  void cast_into(ParamSet<Other>& out) const {
    out.names = names;
    out.tensors.clear();
    for (const auto& t : tensors) out.tensors.push_back(t.template cast<Other>());
  }

  friend bool operator==(const ParamSet& a, const ParamSet& b) {
    if (a.names != b.names || a.tensors.size() != b.tensors.size()) return false;
    for (std::size_t i = 0; i < a.tensors.size(); ++i) {
      if (a.tensors[i].rows() != b.tensors[i].rows() || a.tensors[i].cols() != b.tensors[i].cols() ||
          a.tensors[i] != b.tensors[i]) {
        return false;
      }
    }
    return true;
  }
};

/// Uniform in +-sqrt(6 / (fan_in + fan_out)) with fan_out = rows and
/// fan_in = cols.
template <typename Scalar>
void glorot_uniform(Matrix<Scalar>& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = static_cast<Scalar>(rng.uniform(-limit, limit));
  }
}

template <typename Scalar>
Vector<Scalar> softmax(const Vector<Scalar>& logits) {
  Vector<Scalar> e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

/// -log softmax(logits)[target], computed through log-sum-exp.
template <typename Scalar>
Scalar cross_entropy(const Vector<Scalar>& logits, Eigen::Index target) {
  const Scalar top = logits.maxCoeff();
  return top + std::log((logits.array() - top).exp().sum()) - logits(target);
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

/// Inverted dropout. A null source or a zero rate means inference.
struct Dropout {
  double rate = 0.0;
  Rng* rng = nullptr;

  bool active() const { return rng != nullptr && rate > 0.0; }
};

/// Kept units scaled by 1 / (1 - rate); all ones when inactive.
template <typename Scalar>
Vector<Scalar> dropout_mask(Eigen::Index n, const Dropout* dropout) {
  Vector<Scalar> mask = Vector<Scalar>::Ones(n);
  if (dropout == nullptr || !dropout->active()) return mask;
  const Scalar keep_scale = Scalar(1) / Scalar(1.0 - dropout->rate);
  for (Eigen::Index i = 0; i < n; ++i) mask(i) = dropout->rng->bernoulli(dropout->rate) ? Scalar(0) : keep_scale;
  return mask;
}

/// Index of the largest entry; ties go to the lower index.
template <typename Derived>
Eigen::Index argmax_first(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

}  // namespace darija::neural
