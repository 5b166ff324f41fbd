#pragma once

#include "darija/corpus.hpp"
#include "darija/features.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace darija {

struct LabeledVector {
  SparseVector x;
  Label y = Label::Negative;
};

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes

/// Log-space parameters, rows indexed by index_of(Label).
struct NbModel {
  Eigen::Vector2d log_prior = Eigen::Vector2d::Zero();
  Eigen::MatrixXd log_likelihood;  // kNumLabels x |V|
  double alpha = 1.0;

  std::size_t vocab_size() const { return static_cast<std::size_t>(log_likelihood.cols()); }
};

/// Laplace/Lidstone-smoothed estimates from count vectors:
///   log_prior(c) = ln(docs_c / N)
///   log_likelihood(t|c) = ln((count(t,c) + alpha) / (total_c + alpha |V|))
/// Throws DataError when a class has no documents.
NbModel train_nb(std::span<const LabeledVector> train, double alpha = 1.0);

struct NbPrediction {
  Label label = Label::Negative;
  Eigen::Vector2d log_scores = Eigen::Vector2d::Zero();
};

/// argmax of log_prior + sum_t count(t) log_likelihood(t|c). Scores within
/// 1e-12 (relative) of each other tie, and ties go to Negative.
NbPrediction predict_nb(const NbModel& model, const SparseVector& doc);

// ---------------------------------------------------------------------------
// k-nearest neighbours

struct KnnModel {
  std::vector<SparseVector> vectors;
  std::vector<Label> labels;
  std::vector<double> norms;
  std::size_t k = 5;
};

/// Stores the vectors verbatim. Throws ConfigError unless 1 <= k <= |train|.
KnnModel train_knn(std::span<const LabeledVector> train, std::size_t k = 5);

/// dot(a, b) / (|a| |b|) with norms accumulated in index order; 0 when
/// either side is the zero vector.
double cosine_similarity(const SparseVector& a, double norm_a, const SparseVector& b, double norm_b);
double l2_norm(const SparseVector& v);

/// Majority label of the k most similar stored vectors. Ranking ties go to
/// the lower training index; a split vote goes to the larger summed
/// similarity, then to Negative.
Label predict_knn(const KnnModel& model, const SparseVector& doc);

// ---------------------------------------------------------------------------
// Linear SVM

struct SvmModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double lambda = 1e-4;
  std::size_t epochs = 0;
};

struct SvmOptions {
  double lambda = 1e-4;
  std::size_t epochs = 20;
  std::uint64_t seed = 42;
};

/// Pegasos: stochastic subgradient descent on
///   lambda/2 (|w|^2 + b^2) + mean hinge(y (w.x + b))
/// with step 1/(lambda t), t counting updates across epochs. Each epoch
/// visits the examples in a seeded shuffled order. The bias is treated as the
/// weight of a constant feature, so it is regularized too.
SvmModel train_svm(std::span<const LabeledVector> train, const SvmOptions& options = {});

struct SvmPrediction {
  Label label = Label::Negative;
  double margin = 0.0;
};

/// Positive iff w.x + b > 0.
SvmPrediction predict_svm(const SvmModel& model, const SparseVector& doc);

// ---------------------------------------------------------------------------
// Serialization: "darija-model 1" envelopes with decimal literals that
// round-trip exactly.

void write_model(std::ostream& os, const NbModel& m);
void write_model(std::ostream& os, const KnnModel& m);
void write_model(std::ostream& os, const SvmModel& m);
NbModel read_nb_model(std::istream& is);
KnnModel read_knn_model(std::istream& is);
SvmModel read_svm_model(std::istream& is);

}  // namespace darija
