// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fail.

#include "cli.hpp"
#include "darija/classic.hpp"
#include "darija/corpus.hpp"
#include "darija/experiment.hpp"
#include "darija/neural/model.hpp"
#include "darija/synth.hpp"

#include "classic_oracles.hpp"
#include "golden_preprocess.hpp"
#include "shape_laws.hpp"
#include "tiny_models.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace darija;
using Outcome = std::optional<std::string>;  // nullopt on success, else the reason

struct Criterion {
  const char* id;
  const char* title;
  double limit_seconds;
  std::function<Outcome(std::string& detail)> check;
};

Outcome ac1(std::string& detail) {
  const auto& clean = testing::clean_golden();
  const auto& tokens = testing::token_golden();
  std::size_t failures = 0;
  std::string first;
  for (const auto& c : clean) {
    if (clean_text(c.input) != c.expected && failures++ == 0) first = c.name;
  }
  for (const auto& c : tokens) {
    if (testing::run_golden(c).tokens != c.expected && failures++ == 0) first = c.name;
  }
  const auto total = clean.size() + tokens.size();
  detail = std::to_string(total) + " cases";
  if (total < 25) return "fewer than 25 golden cases";
  if (failures) return std::to_string(failures) + " mismatches, first: " + first;
  return std::nullopt;
}

Outcome ac2(std::string& detail) {
  std::size_t decided = 0;
  for (unsigned mask = 0; mask < 32; ++mask) {
    std::vector<Label> votes;
    std::size_t positive = 0;
    for (unsigned b = 0; b < 5; ++b) {
      const bool p = (mask >> b) & 1u;
      positive += p;
      votes.push_back(p ? Label::Positive : Label::Negative);
    }
    const auto expected = positive >= 4   ? VoteOutcome::Positive
                          : positive <= 1 ? VoteOutcome::Negative
                                          : VoteOutcome::Undecided;
    const auto got = aggregate_votes(votes);
    if (got != expected) return "pattern " + std::to_string(mask) + " gave " + std::string(to_string(got));
    decided += got != VoteOutcome::Undecided;
  }
  detail = std::to_string(decided) + " of 32 decided";
  if (decided != 12) return "expected 12 decided patterns";
  return std::nullopt;
}

Outcome ac3(std::string& detail) {
  Rng rng(303);
  double worst = 0.0;
  const int corpora = 250;
  for (int trial = 0; trial < corpora; ++trial) {
    const auto corpus = testing::random_nb_corpus(rng);
    std::vector<LabeledVector> train;
    for (const auto& d : corpus.docs) train.push_back({testing::counts_of(d.tokens, corpus.vocab), d.label});
    const auto model = train_nb(train, 1.0);
    for (int q = 0; q < 5; ++q) {
      std::vector<std::size_t> query;
      const auto len = rng.uniform_index(6);
      for (std::size_t t = 0; t < len; ++t) query.push_back(rng.uniform_index(corpus.vocab));
      const auto expected = testing::nb_oracle_scores(corpus, query, 1.0);
      const auto got = predict_nb(model, testing::counts_of(query, corpus.vocab));
      for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(got.log_scores(c) - expected[static_cast<std::size_t>(c)]));
      const Label oracle_label = expected[1] > expected[0] ? Label::Positive : Label::Negative;
      if (got.label != oracle_label) return "argmax differs in corpus " + std::to_string(trial);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d corpora, max |diff| %.1e", corpora, worst);
  detail = buf;
  if (worst > 1e-12) return "log scores differ by more than 1e-12";
  return std::nullopt;
}

Outcome ac4(std::string& detail) {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 10 + rng.uniform_index(40);
    const double density = 0.05 + 0.3 * rng.uniform01();
    std::vector<LabeledVector> train;
    std::vector<SparseVector> vs;
    std::vector<Label> ls;
    for (int i = 0; i < 100; ++i) {
      auto x = testing::random_sparse(rng, dim, density);
      const Label y = rng.bernoulli(0.5) ? Label::Positive : Label::Negative;
      vs.push_back(x);
      ls.push_back(y);
      train.push_back({std::move(x), y});
    }
    const std::size_t k = 1 + rng.uniform_index(10);
    const auto model = train_knn(train, k);
    for (int q = 0; q < 100; ++q) {
      const auto query = testing::random_sparse(rng, dim, density);
      if (predict_knn(model, query) != testing::knn_oracle(vs, ls, k, query)) {
        return "trial " + std::to_string(trial) + " query " + std::to_string(q) + " disagrees";
      }
    }
  }
  detail = "100 trials x 100 queries";
  return std::nullopt;
}

Outcome ac5(std::string& detail) {
  Rng rng(505);
  const auto data = testing::separable_points(rng, 200, 20);
  const auto model = train_svm(data, {.lambda = 1e-4, .epochs = 100, .seed = 42});
  std::size_t correct = 0;
  double min_margin = INFINITY;
  for (const auto& ex : data) {
    correct += predict_svm(model, ex.x).label == ex.y;
    min_margin = std::min(min_margin, testing::functional_margin(model, ex));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu/200 correct, min margin %.3g", correct, min_margin);
  detail = buf;
  if (correct != data.size()) return "training accuracy below 100%";
  if (!(min_margin > 0.0)) return "a training point has non-positive margin";
  return std::nullopt;
}

Outcome ac6(std::string& detail) {
  using namespace neural;
  double worst_cnn = 0.0, worst_lstm = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    CnnModel cnn(tiny_cnn_config(), kTinyVocab);
    cnn.params.initialize(rng);
    const auto doc = testing::tiny_doc(rng, 5);
    worst_cnn = std::max(worst_cnn, gradient_check(cnn, doc, static_cast<Eigen::Index>(seed % 2), 1e-5).max_relative_error);
    Rng rng2(seed);
    BiLstmModel lstm(tiny_lstm_config(), kTinyVocab);
    lstm.params.initialize(rng2);
    const auto doc2 = testing::tiny_doc(rng2, 5);
    worst_lstm = std::max(worst_lstm, gradient_check(lstm, doc2, static_cast<Eigen::Index>(seed % 2), 1e-5).max_relative_error);
  }
  Rng rng(11);
  CnnModel cnn(tiny_cnn_config(), kTinyVocab);
  cnn.params.initialize(rng);
  const auto doc = testing::tiny_doc(rng, 6);
  const double corrupted_cnn = testing::corrupted_gradient_check(cnn, doc, 1).max_relative_error;
  BiLstmModel lstm(tiny_lstm_config(), kTinyVocab);
  lstm.params.initialize(rng);
  const double corrupted_lstm = testing::corrupted_gradient_check(lstm, doc, 0).max_relative_error;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max rel err CNN %.1e, BiLSTM %.1e; corrupted %.2g / %.2g", worst_cnn, worst_lstm,
                corrupted_cnn, corrupted_lstm);
  detail = buf;
  if (!(worst_cnn < 1e-4) || !(worst_lstm < 1e-4)) return "relative error not below 1e-4";
  if (!(corrupted_cnn > 1e-2) || !(corrupted_lstm > 1e-2)) return "corrupted gradient not flagged";
  return std::nullopt;
}

Outcome ac7(std::string& detail) {
  Rng rng(707);
  for (int i = 0; i < 500; ++i) {
    if (auto err = testing::check_random_shapes(rng)) return "config " + std::to_string(i) + ": " + *err;
  }
  detail = "500 configs";
  return std::nullopt;
}

struct GridRun {
  Corpus corpus;
  std::optional<ExperimentReport> report;
};

GridRun& default_grid() {
  static GridRun run{synthesize_corpus({.count = 400, .seed = 42}), std::nullopt};
  return run;
}

Outcome ac8(std::string& detail) {
  auto& run = default_grid();
  const auto& corpus = run.corpus;
  const auto stats = corpus_stats(corpus);
  if (corpus.size() != 400) return "generator did not emit 400 comments";
  if (stats.positive != 200 || stats.negative != 200) return "generator is not balanced";
  bool arabic = false, latin = false, zwin = false, mazwinch = false;
  for (const auto& c : corpus.comments()) {
    arabic |= c.script == Script::Arabic;
    latin |= c.script == Script::Latin;
    zwin |= c.label == Label::Positive && c.raw_text.find("زوين") != std::string::npos;
    mazwinch |= c.label == Label::Negative && c.raw_text.find("مزوينش") != std::string::npos;
  }
  if (!arabic || !latin) return "generator lacks one of the scripts";
  if (!zwin || !mazwinch) return "generator lacks the zwin / mazwinch negation pair";

  run.report = run_experiment_grid(corpus, Settings{});
  std::string accs;
  std::optional<std::string> failure;
  for (auto k : kAllClassifiers) {
    const auto& cell = run.report->cell(Condition::PreprocDeleteEmoji, k);
    if (!cell.ok()) {
      failure = std::string(column_name(k)) + " failed: " + cell.error;
      continue;
    }
    accs += std::string(accs.empty() ? "" : ", ") + std::string(column_name(k)) + " " + format_percent(cell.metrics->accuracy);
    if (cell.metrics->accuracy < 0.9 && !failure) failure = std::string(column_name(k)) + " below 90%";
  }
  detail = "delete-emoji accuracy: " + accs;
  return failure;
}

Outcome ac9(std::string& detail) {
  auto& run = default_grid();
  if (!run.report) run.report = run_experiment_grid(run.corpus, Settings{});
  const auto md = render_markdown(*run.report);
  std::istringstream lines(md);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  static const char* kRows[] = {"Accuracy (%)", "Precision (%)", "Recall (%)", "F-measure (%)"};
  std::size_t tables = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] != "| Feature | SVM | NB | KNN | CNN | LSTM |") continue;
    if (i + 5 >= all.size()) return "truncated table";
    if (all[i + 1] != "|---|---:|---:|---:|---:|---:|") return "bad separator row";
    for (std::size_t r = 0; r < 4; ++r) {
      const auto& row = all[i + 2 + r];
      if (row.rfind(std::string("| ") + kRows[r] + " |", 0) != 0) return "row " + std::to_string(r) + " is '" + row + "'";
      if (std::count(row.begin(), row.end(), '|') != 7) return "row '" + row + "' does not have 6 cells";
    }
    ++tables;
  }
  for (auto c : kAllConditions) {
    if (md.find("## " + std::string(caption(c))) == std::string::npos) return "missing caption " + std::string(caption(c));
  }
  detail = std::to_string(tables) + " tables";
  if (tables != 3) return "expected three tables";
  return std::nullopt;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome ac10(std::string& detail) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "darija-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream out, err;
  const auto data = (dir / "corpus.jsonl").string();
  if (cli::run_cli({"-q", "synth", "--out", data}, out, err) != 0) return "synth failed: " + err.str();
  for (const char* tag : {"a", "b"}) {
    const int code = cli::run_cli({"-q", "experiment", "--data", data, "--seed", "42", "--out",
                                   (dir / (std::string(tag) + ".md")).string(), "--json",
                                   (dir / (std::string(tag) + ".json")).string()},
                                  out, err);
    if (code != 0) return "experiment exited " + std::to_string(code) + ": " + err.str();
  }
  const auto md_a = slurp(dir / "a.md"), md_b = slurp(dir / "b.md");
  const auto json_a = slurp(dir / "a.json"), json_b = slurp(dir / "b.json");
  fs::remove_all(dir);
  detail = std::to_string(md_a.size()) + " + " + std::to_string(json_a.size()) + " bytes";
  if (md_a.empty() || json_a.empty()) return "empty report";
  if (md_a != md_b) return "report.md differs";
  if (json_a != json_b) return "report.json differs";
  return std::nullopt;
}

Outcome ac11(std::string& detail) {
  Settings s;
  s.ngram = NGramMode::Bigram;
  const auto report = run_experiment_grid(default_grid().corpus, s);
  std::size_t ok = 0;
  std::string first_error;
  for (auto c : kAllConditions) {
    for (auto k : kAllClassifiers) {
      if (report.cell(c, k).ok()) {
        ++ok;
      } else if (first_error.empty()) {
        first_error = std::string(to_string(c)) + "/" + std::string(column_name(k)) + ": " + report.cell(c, k).error;
      }
    }
  }
  const auto md = render_markdown(report);
  detail = std::to_string(ok) + "/15 cells, delete-emoji SVM " +
           (report.cell(Condition::PreprocDeleteEmoji, Classifier::Svm).ok()
                ? format_percent(report.cell(Condition::PreprocDeleteEmoji, Classifier::Svm).metrics->accuracy)
                : "n/a");
  if (report.ngram != NGramMode::Bigram || md.find("bigram") == std::string::npos) return "report does not record bigram mode";
  if (ok != 15) return first_error;
  return std::nullopt;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "preprocessing golden suite", 1, ac1},
      {"AC2", "vote aggregation over all 32 patterns", 1, ac2},
      {"AC3", "naive Bayes matches enumeration oracle", 10, ac3},
      {"AC4", "KNN matches exhaustive-scan oracle", 30, ac4},
      {"AC5", "SVM separates the seeded separable set", 5, ac5},
      {"AC6", "CNN and BiLSTM gradient checks", 60, ac6},
      {"AC7", "shape laws over random configs", 10, ac7},
      {"AC8", "synthetic benchmark, five models at 90% or better", 300, ac8},
      {"AC9", "report renders three 5 x 4 tables", 5, ac9},
      {"AC10", "experiment output is byte-identical across runs", 600, ac10},
      {"AC11", "bigram grid completes with all 15 cells", 300, ac11},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      outcome = c.check(detail);
    } catch (const std::exception& e) {
      outcome = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome && seconds > c.limit_seconds) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "took longer than %.0f s", c.limit_seconds);
      outcome = buf;
    }
    failed += outcome.has_value();
    std::printf("%s %s %s (%.2f s)", c.id, outcome ? "FAIL" : "PASS", c.title, seconds);
    if (!detail.empty()) std::printf(": %s", detail.c_str());
    if (outcome) std::printf(" -- %s", outcome->c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
