#include "darija/error.hpp"
#include "darija/experiment.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace darija {

using Json = nlohmann::ordered_json;

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", value * 100.0);
  return buf;
}

namespace {

constexpr std::array<std::string_view, 4> kRowNames{"Accuracy (%)", "Precision (%)", "Recall (%)", "F-measure (%)"};

double metric(const MetricsRow& m, std::size_t row) {
  switch (row) {
    case 0: return m.accuracy;
    case 1: return m.precision;
    case 2: return m.recall;
    default: return m.f1;
  }
}

}  // namespace

std::string render_markdown(const ExperimentReport& r) {
  std::ostringstream os;
  os << "# Sentiment classification results\n\n"
     << "- seed: " << r.seed << "\n"
     << "- features: " << to_string(r.ngram) << " tf-idf\n"
     << "- corpus: " << r.corpus_size << " comments, " << r.modeling_size << " labeled, split " << r.train_size
     << " train / " << r.test_size << " test\n"
     << "- corpus fingerprint: " << r.corpus_fingerprint << "\n"
     << "- settings fingerprint: " << r.settings_fingerprint << "\n";

  for (auto condition : kAllConditions) {
    const auto& summary = r.conditions[static_cast<std::size_t>(condition)];
    os << "\n## " << caption(condition) << "\n\n"
       << "Condition `" << to_string(condition) << "`: " << summary.train_docs << " train / " << summary.test_docs
       << " test documents, " << summary.dropped_empty << " empty and " << summary.dropped_duplicates
       << " duplicate comments dropped.\n\n";
    os << "| Feature |";
    for (auto k : kAllClassifiers) os << ' ' << column_name(k) << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < kAllClassifiers.size(); ++i) os << "---:|";
    os << '\n';
    for (std::size_t row = 0; row < kRowNames.size(); ++row) {
      os << "| " << kRowNames[row] << " |";
      for (auto k : kAllClassifiers) {
        const auto& cell = r.cell(condition, k);
        os << ' ' << (cell.ok() ? format_percent(metric(*cell.metrics, row)) : std::string("n/a")) << " |";
      }
      os << '\n';
    }
    bool header = false;
    for (auto k : kAllClassifiers) {
      const auto& cell = r.cell(condition, k);
      if (cell.ok()) continue;
      if (!header) os << '\n';
      header = true;
      os << "- " << column_name(k) << " failed: " << cell.error << '\n';
    }
  }
  return os.str();
}

std::string render_json(const ExperimentReport& r) {
  Json j;
  j["schema"] = "darija-experiment-report";
  j["version"] = ExperimentReport::kSchemaVersion;
  j["seed"] = r.seed;
  j["seeds"] = {{"split", r.seed}, {"svm", r.seed}, {"neural", r.seed}};
  j["ngram"] = to_string(r.ngram);
  j["corpus"] = {{"fingerprint", r.corpus_fingerprint},
                 {"comments", r.corpus_size},
                 {"labeled", r.modeling_size},
                 {"train", r.train_size},
                 {"test", r.test_size}};
  j["settings_fingerprint"] = r.settings_fingerprint;
  j["conditions"] = Json::array();
  for (auto condition : kAllConditions) {
    const auto& s = r.conditions[static_cast<std::size_t>(condition)];
    Json c;
    c["name"] = to_string(condition);
    c["caption"] = caption(condition);
    c["pipeline_fingerprint"] = s.pipeline_fingerprint;
    c["train_docs"] = s.train_docs;
    c["test_docs"] = s.test_docs;
    c["dropped_empty"] = s.dropped_empty;
    c["dropped_duplicates"] = s.dropped_duplicates;
    if (!s.error.empty()) c["error"] = s.error;
    c["cells"] = Json::array();
    for (auto k : kAllClassifiers) {
      const auto& cell = r.cell(condition, k);
      Json jc;
      jc["model"] = column_name(k);
      if (cell.ok()) {
        jc["status"] = "ok";
        jc["accuracy"] = cell.metrics->accuracy;
        jc["precision"] = cell.metrics->precision;
        jc["recall"] = cell.metrics->recall;
        jc["f1"] = cell.metrics->f1;
        if (cell.confusion) {
          Json cm = Json::array();
          for (const auto& row : cell.confusion->counts) cm.push_back(Json(row));
          jc["confusion"] = cm;
        }
      } else {
        jc["status"] = "error";
        jc["error"] = cell.error;
      }
      c["cells"].push_back(jc);
    }
    j["conditions"].push_back(c);
  }
  return j.dump(2) + "\n";
}

ExperimentReport parse_report_json(std::string_view text) {
  try {
    const auto j = Json::parse(text);
    if (j.at("schema") != "darija-experiment-report") throw DataError("report: unexpected schema");
    if (j.at("version").get<int>() != ExperimentReport::kSchemaVersion) {
      throw DataError("report: unsupported version " + j.at("version").dump());
    }
    ExperimentReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto ngram = parse_ngram_mode(j.at("ngram").get<std::string>());
    if (!ngram) throw DataError("report: unknown ngram mode");
    r.ngram = *ngram;
    const auto& corpus = j.at("corpus");
    r.corpus_fingerprint = corpus.at("fingerprint").get<std::string>();
    r.corpus_size = corpus.at("comments").get<std::size_t>();
    r.modeling_size = corpus.at("labeled").get<std::size_t>();
    r.train_size = corpus.at("train").get<std::size_t>();
    r.test_size = corpus.at("test").get<std::size_t>();
    r.settings_fingerprint = j.at("settings_fingerprint").get<std::string>();

    const auto& conditions = j.at("conditions");
    if (conditions.size() != kAllConditions.size()) throw DataError("report: expected 3 conditions");
    for (const auto& c : conditions) {
      const auto condition = parse_condition(c.at("name").get<std::string>());
      if (!condition) throw DataError("report: unknown condition " + c.at("name").dump());
      auto& s = r.conditions[static_cast<std::size_t>(*condition)];
      s.pipeline_fingerprint = c.at("pipeline_fingerprint").get<std::string>();
      s.train_docs = c.at("train_docs").get<std::size_t>();
      s.test_docs = c.at("test_docs").get<std::size_t>();
      s.dropped_empty = c.at("dropped_empty").get<std::size_t>();
      s.dropped_duplicates = c.at("dropped_duplicates").get<std::size_t>();
      if (c.contains("error")) s.error = c.at("error").get<std::string>();
      const auto& cells = c.at("cells");
      if (cells.size() != kAllClassifiers.size()) throw DataError("report: expected 5 cells per condition");
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& jc = cells[i];
        if (jc.at("model").get<std::string>() != column_name(kAllClassifiers[i])) {
          throw DataError("report: cells out of order in condition " + std::string(to_string(*condition)));
        }
        auto& cell = r.cell(*condition, kAllClassifiers[i]);
        if (jc.at("status") == "ok") {
          cell.metrics = MetricsRow{jc.at("accuracy").get<double>(), jc.at("precision").get<double>(),
                                    jc.at("recall").get<double>(), jc.at("f1").get<double>()};
          if (jc.contains("confusion")) {
            ConfusionMatrix cm;
            cm.counts = jc.at("confusion").get<decltype(cm.counts)>();
            cell.confusion = cm;
          }
        } else {
          cell.error = jc.at("error").get<std::string>();
        }
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
}

}  // namespace darija
