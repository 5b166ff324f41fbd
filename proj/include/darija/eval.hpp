#pragma once

#include "darija/corpus.hpp"

#include <array>
#include <cstddef>
#include <span>

namespace darija {

/// counts[true][predicted], indexed by index_of(Label).
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> counts{};

  std::size_t& at(Label truth, Label predicted) { return counts[index_of(truth)][index_of(predicted)]; }
  std::size_t at(Label truth, Label predicted) const { return counts[index_of(truth)][index_of(predicted)]; }
  std::size_t total() const;
  std::size_t correct() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws DataError on empty input or a length mismatch.
ConfusionMatrix confusion(std::span<const Label> golds, std::span<const Label> preds);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 0/0 is taken as 0 for precision, recall and F1.
ClassMetrics class_metrics(const ConfusionMatrix& m, Label c);

/// Accuracy plus macro (unweighted class mean) precision, recall and F1.
struct MetricsRow {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// Throws DataError when the matrix is empty.
MetricsRow compute_metrics(const ConfusionMatrix& m);

}  // namespace darija
