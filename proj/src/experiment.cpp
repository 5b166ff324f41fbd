#include "darija/experiment.hpp"

#include "darija/error.hpp"

#include <exception>

namespace darija {

namespace {

CellResult run_cell(Classifier kind, const PreparedSplit& data, const Settings& settings) {
  CellResult cell;
  try {
    const auto model = train_classifier(kind, data.train_docs, data.train_labels, settings);
    std::vector<Label> preds;
    preds.reserve(data.test_docs.size());
    for (const auto& doc : data.test_docs) preds.push_back(model.predict(doc));
    const auto cm = confusion(data.test_labels, preds);
    cell.metrics = compute_metrics(cm);
    cell.confusion = cm;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

ExperimentReport run_experiment_grid(const Corpus& corpus, const Settings& settings, const CellObserver& observer) {
  settings.validate();
  ExperimentReport report;
  report.seed = settings.seed;
  report.ngram = settings.ngram;
  report.corpus_fingerprint = fingerprint(to_jsonl(corpus));
  report.settings_fingerprint = fingerprint(settings.canonical());
  report.corpus_size = corpus.size();

  const auto modeling = corpus.modeling_subset();
  report.modeling_size = modeling.size();
  const auto split = stratified_split(modeling, settings.split_spec());
  report.train_size = split.train.size();
  report.test_size = split.test.size();

  for (auto condition : kAllConditions) {
    auto& summary = report.conditions[static_cast<std::size_t>(condition)];
    PreparedSplit data;
    try {
      const auto pipeline = pipeline_for(condition, settings);
      summary.pipeline_fingerprint = fingerprint(pipeline.canonical());
      data = prepare_split(split, pipeline);
    } catch (const std::exception& e) {
      summary.error = e.what();
      for (auto kind : kAllClassifiers) {
        auto& cell = report.cell(condition, kind);
        cell.error = std::string("pipeline failed: ") + e.what();
        if (observer) observer(condition, kind, cell);
      }
      continue;
    }
    summary.train_docs = data.train_docs.size();
    summary.test_docs = data.test_docs.size();
    summary.dropped_empty = data.dropped_empty;
    summary.dropped_duplicates = data.dropped_duplicates;
    for (auto kind : kAllClassifiers) {
      auto& cell = report.cell(condition, kind);
      cell = run_cell(kind, data, settings);
      if (observer) observer(condition, kind, cell);
    }
  }
  return report;
}

}  // namespace darija
