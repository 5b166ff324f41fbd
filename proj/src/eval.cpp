#include "darija/eval.hpp"

#include "darija/error.hpp"

#include <string>

namespace darija {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

std::size_t ConfusionMatrix::correct() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kNumLabels; ++i) n += counts[i][i];
  return n;
}

ConfusionMatrix confusion(std::span<const Label> golds, std::span<const Label> preds) {
  if (golds.size() != preds.size()) {
    throw DataError("confusion: " + std::to_string(golds.size()) + " gold labels but " +
                    std::to_string(preds.size()) + " predictions");
  }
  if (golds.empty()) throw DataError("confusion: no labels to evaluate");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < golds.size(); ++i) ++m.at(golds[i], preds[i]);
  return m;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassMetrics class_metrics(const ConfusionMatrix& m, Label c) {
  std::size_t predicted = 0;
  std::size_t actual = 0;
  for (auto other : kAllLabels) {
    predicted += m.at(other, c);
    actual += m.at(c, other);
  }
  ClassMetrics out;
  out.precision = ratio(m.at(c, c), predicted);
  out.recall = ratio(m.at(c, c), actual);
  const double sum = out.precision + out.recall;
  out.f1 = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
  return out;
}

MetricsRow compute_metrics(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total == 0) throw DataError("metrics of an empty confusion matrix");
  MetricsRow row;
  row.accuracy = ratio(m.correct(), total);
  for (auto c : kAllLabels) {
    const auto cm = class_metrics(m, c);
    row.precision += cm.precision;
    row.recall += cm.recall;
    row.f1 += cm.f1;
  }
  const auto k = static_cast<double>(kNumLabels);
  row.precision /= k;
  row.recall /= k;
  row.f1 /= k;
  return row;
}

}  // namespace darija
