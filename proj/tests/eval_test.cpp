#include "darija/error.hpp"
#include "darija/experiment.hpp"
#include "darija/synth.hpp"

#include <gtest/gtest.h>

namespace darija {
namespace {

constexpr Label P = Label::Positive;
constexpr Label N = Label::Negative;

TEST(Confusion, HandExample) {
  const std::vector<Label> gold{P, P, P, N, N};
  const std::vector<Label> pred{P, P, N, P, N};
  const auto m = confusion(gold, pred);
  EXPECT_EQ(m.at(P, P), 2u);
  EXPECT_EQ(m.at(P, N), 1u);
  EXPECT_EQ(m.at(N, P), 1u);
  EXPECT_EQ(m.at(N, N), 1u);
  const auto row = compute_metrics(m);
  EXPECT_DOUBLE_EQ(row.accuracy, 0.6);
  EXPECT_NEAR(row.precision, 7.0 / 12.0, 1e-15);
  EXPECT_NEAR(row.recall, 7.0 / 12.0, 1e-15);
  EXPECT_NEAR(row.f1, 7.0 / 12.0, 1e-15);
}

TEST(Confusion, InputErrors) {
  const std::vector<Label> two{P, N}, one{P}, none;
  EXPECT_THROW(confusion(two, one), DataError);
  EXPECT_THROW(confusion(none, none), DataError);
  EXPECT_THROW(compute_metrics(ConfusionMatrix{}), DataError);
}

TEST(Metrics, PerfectPredictions) {
  const std::vector<Label> gold{P, N, N, P};
  EXPECT_EQ(compute_metrics(confusion(gold, gold)), (MetricsRow{1.0, 1.0, 1.0, 1.0}));
}

TEST(Metrics, NeverPredictingAClassScoresZeroForIt) {
  const std::vector<Label> gold{P, P, N, N};
  const std::vector<Label> pred{P, P, P, P};
  const auto m = confusion(gold, pred);
  const auto neg = class_metrics(m, N);
  EXPECT_EQ(neg.precision, 0.0);
  EXPECT_EQ(neg.recall, 0.0);
  EXPECT_EQ(neg.f1, 0.0);
  const auto row = compute_metrics(m);
  EXPECT_DOUBLE_EQ(row.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(row.precision, 0.25);
  EXPECT_DOUBLE_EQ(row.recall, 0.5);
}

TEST(Metrics, BoundedByZeroAndOne) {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Label> gold, pred;
    const auto n = 1 + rng.uniform_index(20);
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(rng.bernoulli(0.5) ? P : N);
      pred.push_back(rng.bernoulli(0.5) ? P : N);
    }
    const auto row = compute_metrics(confusion(gold, pred));
    for (double v : {row.accuracy, row.precision, row.recall, row.f1}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Report, FormatPercent) {
  EXPECT_EQ(format_percent(0.9), "90.0");
  EXPECT_EQ(format_percent(1.0), "100.0");
  EXPECT_EQ(format_percent(0.0), "0.0");
  EXPECT_EQ(format_percent(7.0 / 12.0), "58.3");
}

Settings small_settings() {
  Settings s;
  s.apply(
      "cnn.filters=4\ncnn.embed_dim=8\ncnn.fc_dim=16\n"
      "lstm.hidden=6\nlstm.embed_dim=8\nlstm.fc_dim=16\n"
      "train.epochs=2\nsvm.epochs=5\n");
  return s;
}

const ExperimentReport& small_report() {
  static const ExperimentReport r = run_experiment_grid(synthesize_corpus({.count = 60, .seed = 3}), small_settings());
  return r;
}

TEST(Report, MarkdownLayout) {
  const auto md = render_markdown(small_report());
  std::size_t pos = 0;
  for (auto c : kAllConditions) {
    const auto at = md.find("## " + std::string(caption(c)), pos);
    ASSERT_NE(at, std::string::npos) << caption(c);
    pos = at;
    const auto header = md.find("| Feature | SVM | NB | KNN | CNN | LSTM |", pos);
    ASSERT_NE(header, std::string::npos);
    std::size_t row_pos = header;
    for (const char* row : {"| Accuracy (%) |", "| Precision (%) |", "| Recall (%) |", "| F-measure (%) |"}) {
      const auto r = md.find(row, row_pos);
      ASSERT_NE(r, std::string::npos) << row;
      row_pos = r;
    }
    pos = row_pos;
  }
}

TEST(Report, JsonRoundTrip) {
  const auto& r = small_report();
  const auto json = render_json(r);
  const auto back = parse_report_json(json);
  EXPECT_EQ(back, r);
  EXPECT_EQ(render_json(back), json);
  EXPECT_THROW(parse_report_json("{\"schema\": \"other\"}"), DataError);
  EXPECT_THROW(parse_report_json("not json"), DataError);
}

TEST(Grid, AllCellsFilledAndDeterministic) {
  const auto& a = small_report();
  for (auto c : kAllConditions) {
    EXPECT_TRUE(a.conditions[static_cast<std::size_t>(c)].error.empty());
    for (auto k : kAllClassifiers) {
      EXPECT_TRUE(a.cell(c, k).ok()) << to_string(c) << "/" << to_string(k) << ": " << a.cell(c, k).error;
    }
  }
  EXPECT_EQ(a.train_size + a.test_size, a.modeling_size);
  const auto b = run_experiment_grid(synthesize_corpus({.count = 60, .seed = 3}), small_settings());
  EXPECT_EQ(render_markdown(a), render_markdown(b));
  EXPECT_EQ(render_json(a), render_json(b));
}

TEST(Grid, SingleClassCorpusRecordsErrorsWithoutStopping) {
  std::vector<LabeledComment> comments;
  for (int i = 0; i < 20; ++i) {
    comments.push_back({"c" + std::to_string(i), "zwin bzaf " + std::to_string(i) + "x", P, std::nullopt, std::nullopt});
  }
  const auto r = run_experiment_grid(Corpus(comments), small_settings());
  const auto& nb = r.cell(Condition::Raw, Classifier::Nb);
  EXPECT_FALSE(nb.ok());
  EXPECT_FALSE(nb.error.empty());
  EXPECT_NE(render_markdown(r).find("n/a"), std::string::npos);
  EXPECT_EQ(parse_report_json(render_json(r)), r);
}

TEST(Grid, ObserverSeesEveryCellInOrder) {
  std::vector<std::pair<Condition, Classifier>> seen;
  Settings s = small_settings();
  run_experiment_grid(synthesize_corpus({.count = 40, .seed = 4}), s,
                      [&](Condition c, Classifier k, const CellResult&) { seen.emplace_back(c, k); });
  ASSERT_EQ(seen.size(), 15u);
  EXPECT_EQ(seen.front(), std::make_pair(Condition::Raw, Classifier::Svm));
  EXPECT_EQ(seen.back(), std::make_pair(Condition::PreprocDeleteEmoji, Classifier::Lstm));
}

}  // namespace
}  // namespace darija
