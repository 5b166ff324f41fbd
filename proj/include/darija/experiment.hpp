#pragma once

#include "darija/classifier.hpp"
#include "darija/eval.hpp"
#include "darija/settings.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace darija {

/// One (condition, classifier) cell: either metrics or the error that
/// stopped it.
struct CellResult {
  std::optional<ConfusionMatrix> confusion;
  std::optional<MetricsRow> metrics;
  std::string error;

  bool ok() const { return metrics.has_value(); }
  friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct ConditionSummary {
  std::string pipeline_fingerprint;
  std::size_t train_docs = 0;
  std::size_t test_docs = 0;
  std::size_t dropped_empty = 0;
  std::size_t dropped_duplicates = 0;
  std::string error;  // set when the pipeline itself failed

  friend bool operator==(const ConditionSummary&, const ConditionSummary&) = default;
};

struct ExperimentReport {
  static constexpr int kSchemaVersion = 1;

  std::uint64_t seed = 0;
  NGramMode ngram = NGramMode::Unigram;
  std::string corpus_fingerprint;
  std::string settings_fingerprint;
  std::size_t corpus_size = 0;
  std::size_t modeling_size = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::array<ConditionSummary, kAllConditions.size()> conditions{};
  std::array<std::array<CellResult, kAllClassifiers.size()>, kAllConditions.size()> cells{};

  CellResult& cell(Condition c, Classifier k) { return cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]; }
  const CellResult& cell(Condition c, Classifier k) const {
    return cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
  }

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Called after each cell; used for progress logging.
using CellObserver = std::function<void(Condition, Classifier, const CellResult&)>;

/// Splits the labeled part of the corpus once, then for every condition
/// runs its pipeline and trains and tests all five classifiers. A failing
/// cell records its error and the grid carries on.
ExperimentReport run_experiment_grid(const Corpus& corpus, const Settings& settings,
                                     const CellObserver& observer = {});

/// Three tables, one per condition, with percentages to one decimal.
std::string render_markdown(const ExperimentReport& report);
/// Structured report; see docs/report-schema.md.
std::string render_json(const ExperimentReport& report);
/// Inverse of render_json. Throws DataError on schema violations.
ExperimentReport parse_report_json(std::string_view text);

/// "90.0" for 0.9.
std::string format_percent(double value);

}  // namespace darija
