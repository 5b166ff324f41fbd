#include "cli.hpp"

#include "darija/classifier.hpp"
#include "darija/corpus.hpp"
#include "darija/error.hpp"
#include "darija/experiment.hpp"
#include "darija/neural/model.hpp"
#include "darija/rng.hpp"
#include "darija/settings.hpp"
#include "darija/synth.hpp"
#include "darija/text_io.hpp"
#include "darija/unicode.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace darija::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 42;

class Log {
 public:
  Log(std::ostream& err, const bool& quiet) : err_(err), quiet_(quiet) {}
  void operator()(const std::string& msg) const {
    if (!quiet_) err_ << "darija: " << msg << '\n';
  }

 private:
  std::ostream& err_;
  const bool& quiet_;
};

struct SettingsFlags {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string ngram;

  void attach(CLI::App* app, bool with_ngram) {
    app->add_option("--config", config, "key=value settings file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override one setting, key=value (repeatable)");
    app->add_option("--seed", seed, "random seed (default 42)");
    if (with_ngram) app->add_option("--ngram", ngram, "unigram, bigram or both");
  }

  /// Defaults, then the config file, then --set, then dedicated flags.
  Settings resolve() const {
    Settings s;
    if (!config.empty()) s.apply_file(config);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      s.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) s.seed = *seed;
    if (!ngram.empty()) s.set("ngram", ngram);
    s.validate();
    return s;
  }
};

CorpusFormat format_for(const std::string& path, const std::string& flag) {
  if (!flag.empty()) {
    if (flag == "jsonl") return CorpusFormat::Jsonl;
    if (flag == "csv") return CorpusFormat::Csv;
    throw ConfigError("unknown format '" + flag + "' (jsonl or csv)");
  }
  return format_from_path(path).value_or(CorpusFormat::Jsonl);
}

Corpus read_corpus(const std::string& path, const std::string& format = {}) {
  return load_corpus(path, format_for(path, format));
}

/// Writes to the named file, or to `out` for an empty name or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path);
  f << content;
  if (!f.flush()) throw DataError("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json tokens_json(const TokenSequence& doc) {
  Json tokens = Json::array();
  for (const auto& t : doc.tokens) tokens.push_back(t.text);
  return tokens;
}

// -- subcommands -------------------------------------------------------------

int cmd_ingest(const std::string& in, const std::string& format, const std::string& copy, std::ostream& out,
               const Log& log) {
  const auto corpus = read_corpus(in, format);
  const auto stats = corpus_stats(corpus);
  log("read " + std::to_string(corpus.size()) + " comments from " + in);
  if (stats.undecided) log(std::to_string(stats.undecided) + " comments without a 4-of-5 majority are excluded from modeling");
  if (!copy.empty()) save_corpus(corpus, copy, format_for(copy, {}));
  out << to_json(stats) << '\n';
  return kOk;
}

int cmd_votes(const std::string& in, const std::string& dest, std::ostream& out, const Log& log) {
  const auto content = read_file(in);
  if (auto bad = unicode::find_invalid(content)) {
    throw DataError(in + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  std::string result;
  std::size_t line_no = 0, decided = 0, undecided = 0;
  std::istringstream lines(content);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& field, const std::string& what) {
      throw DataError(in + ": line " + std::to_string(line_no) + ", field '" + field + "': " + what);
    };
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail("record", e.what());
    }
    if (!rec.is_object()) fail("record", "not a JSON object");
    if (!rec.contains("id") || !rec["id"].is_string()) fail("id", "missing or not a string");
    if (!rec.contains("votes") || !rec["votes"].is_array()) fail("votes", "missing or not an array");
    std::vector<Label> votes;
    for (const auto& v : rec["votes"]) {
      const auto l = v.is_string() ? parse_label(v.get<std::string>()) : std::nullopt;
      if (!l) fail("votes", "invalid vote " + v.dump());
      votes.push_back(*l);
    }
    if (votes.size() != kVotesPerComment) {
      fail("votes", "expected 5 votes, found " + std::to_string(votes.size()));
    }
    const auto outcome = aggregate_votes(votes);
    (outcome == VoteOutcome::Undecided ? undecided : decided) += 1;
    rec["outcome"] = to_string(outcome);
    result += rec.dump() + '\n';
  }
  log(std::to_string(decided) + " decided, " + std::to_string(undecided) + " undecided");
  emit(dest, result, out);
  return kOk;
}

int cmd_preprocess(const std::string& in, const std::string& dest, const std::string& condition_name,
                   const std::string& emoji, const SettingsFlags& flags, std::ostream& out, const Log& log) {
  auto settings = flags.resolve();
  if (!emoji.empty()) settings.set("emoji_mode", emoji);
  PipelineConfig pipeline = settings.pipeline();
  if (!condition_name.empty()) {
    const auto condition = parse_condition(condition_name);
    if (!condition) throw ConfigError("unknown condition '" + condition_name + "'");
    pipeline = pipeline_for(*condition, settings);
  }
  const auto corpus = read_corpus(in);
  const auto result = run_pipeline(corpus, pipeline);
  std::unordered_map<std::string, const LabeledComment*> by_id;
  for (const auto& c : corpus.comments()) by_id.emplace(c.id, &c);
  std::string text;
  for (const auto& doc : result.docs) {
    Json rec;
    rec["id"] = doc.source_id;
    rec["tokens"] = tokens_json(doc);
    if (const auto label = by_id.at(doc.source_id)->effective_label()) rec["label"] = to_string(*label);
    text += rec.dump() + '\n';
  }
  log(std::to_string(result.docs.size()) + " documents kept, " + std::to_string(result.dropped_empty) +
      " empty and " + std::to_string(result.dropped_duplicates) + " duplicates dropped");
  emit(dest, text, out);
  return kOk;
}

int cmd_train(const std::string& data, const std::string& model_name, const std::string& condition_name,
              const std::string& dest, const SettingsFlags& flags, std::ostream& out, const Log& log) {
  const auto settings = flags.resolve();
  const auto kind = parse_classifier(model_name);
  if (!kind) throw ConfigError("unknown model '" + model_name + "' (svm, nb, knn, cnn, lstm)");
  const auto condition = parse_condition(condition_name);
  if (!condition) throw ConfigError("unknown condition '" + condition_name + "'");

  const auto corpus = read_corpus(data).modeling_subset();
  ModelBundle bundle;
  bundle.condition = *condition;
  bundle.pipeline = pipeline_for(*condition, settings);
  auto docs = run_pipeline(corpus, bundle.pipeline).docs;
  std::unordered_map<std::string, Label> label_of;
  for (const auto& c : corpus.comments()) label_of.emplace(c.id, *c.label);
  std::vector<Label> labels;
  for (const auto& d : docs) labels.push_back(label_of.at(d.source_id));
  log("training " + std::string(column_name(*kind)) + " on " + std::to_string(docs.size()) + " documents");
  bundle.classifier = train_classifier(*kind, docs, labels, settings);
  std::ostringstream os;
  write_bundle(os, bundle);
  emit(dest, os.str(), out);
  log("wrote " + dest);
  return kOk;
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open model " + path);
  try {
    return read_bundle(f);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

int cmd_predict(const std::string& model_path, const std::string& in, const std::string& dest, std::ostream& out,
                const Log& log) {
  const auto bundle = load_bundle(model_path);
  const auto corpus = read_corpus(in);
  std::string text;
  for (const auto& c : corpus.comments()) {
    const auto doc = process_text(c.raw_text, c.id, bundle.pipeline);
    Json rec;
    rec["id"] = c.id;
    rec["label"] = to_string(bundle.classifier.predict(doc));
    text += rec.dump() + '\n';
  }
  log("predicted " + std::to_string(corpus.size()) + " comments");
  emit(dest, text, out);
  return kOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& data, const std::string& dest,
                 std::ostream& out, const Log& log) {
  const auto bundle = load_bundle(model_path);
  const auto corpus = read_corpus(data).modeling_subset();
  std::vector<Label> golds, preds;
  for (const auto& c : corpus.comments()) {
    golds.push_back(*c.label);
    preds.push_back(bundle.classifier.predict(process_text(c.raw_text, c.id, bundle.pipeline)));
  }
  const auto cm = confusion(golds, preds);
  const auto m = compute_metrics(cm);
  Json j;
  j["model"] = column_name(bundle.classifier.kind);
  j["condition"] = to_string(bundle.condition);
  j["count"] = cm.total();
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  Json rows = Json::array();
  for (const auto& row : cm.counts) rows.push_back(Json(row));
  j["confusion"] = rows;
  log("accuracy " + format_percent(m.accuracy) + "%, macro F1 " + format_percent(m.f1) + "%");
  emit(dest, j.dump(2) + '\n', out);
  return kOk;
}

int cmd_experiment(const std::string& data, const std::string& md, const std::string& json,
                   const SettingsFlags& flags, std::ostream& out, const Log& log) {
  const auto settings = flags.resolve();
  const auto corpus = read_corpus(data);
  log("running the 3 x 5 grid on " + std::to_string(corpus.size()) + " comments, seed " +
      std::to_string(settings.seed) + ", " + std::string(to_string(settings.ngram)) + " features");
  const auto report = run_experiment_grid(corpus, settings, [&](Condition c, Classifier k, const CellResult& cell) {
    log(std::string(to_string(c)) + " / " + std::string(column_name(k)) + ": " +
        (cell.ok() ? "accuracy " + format_percent(cell.metrics->accuracy) + "%" : "failed: " + cell.error));
  });
  emit(md, render_markdown(report), out);
  if (!json.empty()) emit(json, render_json(report), out);
  return kOk;
}

int cmd_gradcheck(const std::string& model_name, std::uint64_t seed, double epsilon, std::size_t length,
                  std::ostream& out) {
  if (!(epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
  Rng rng(seed);
  auto random_doc = [&](std::size_t max_len) {
    if (length < 1 || length > max_len) throw ConfigError("--length must lie in [1, " + std::to_string(max_len) + "]");
    neural::EncodedDoc doc;
    doc.indices.assign(max_len, 0);
    for (std::size_t i = 0; i < length; ++i) {
      doc.indices[i] = 1 + static_cast<int>(rng.uniform_index(neural::kTinyVocab));
    }
    doc.true_length = length;
    return doc;
  };
  const Eigen::Index target = static_cast<Eigen::Index>(seed % 2);
  neural::GradientComparison result;
  if (model_name == "cnn") {
    neural::CnnModel model(neural::tiny_cnn_config(), neural::kTinyVocab);
    model.params.initialize(rng);
    result = neural::gradient_check(model, random_doc(model.config.max_len), target, epsilon);
  } else if (model_name == "lstm") {
    neural::BiLstmModel model(neural::tiny_lstm_config(), neural::kTinyVocab);
    model.params.initialize(rng);
    result = neural::gradient_check(model, random_doc(model.config.max_len), target, epsilon);
  } else {
    throw ConfigError("--model must be cnn or lstm");
  }
  const bool pass = result.max_relative_error < 1e-4;
  out << "max relative error " << text_io::format_double(result.max_relative_error) << " over " << result.checked
      << " parameters (worst " << result.tensor << '[' << result.row << ',' << result.col << "] analytic "
      << text_io::format_double(result.analytic) << " numeric " << text_io::format_double(result.numeric) << ") "
      << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kOk : kInvariant;
}

int cmd_synth(const std::string& dest, std::uint64_t seed, std::size_t count, std::ostream& out, const Log& log) {
  const auto corpus = synthesize_corpus({count, seed});
  const auto format = dest.empty() || dest == "-" ? CorpusFormat::Jsonl : format_for(dest, {});
  emit(dest, format == CorpusFormat::Csv ? to_csv(corpus) : to_jsonl(corpus), out);
  log("generated " + std::to_string(corpus.size()) + " comments");
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moroccan Darija sentiment pipeline", "darija"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress log messages");
  const Log log(err, quiet);
  std::function<int()> action;

  std::string in, dest, format, copy, data, model, condition, emoji, json_path;
  SettingsFlags flags;

  auto* ingest = app.add_subcommand("ingest", "validate a corpus and print its statistics as JSON");
  ingest->add_option("--in", in, "corpus file (.jsonl or .csv)")->required();
  ingest->add_option("--format", format, "jsonl or csv (default: by extension)");
  ingest->add_option("--out", copy, "also save the validated corpus here");
  ingest->callback([&] { action = [&] { return cmd_ingest(in, format, copy, out, log); }; });

  auto* votes = app.add_subcommand("votes", "aggregate five annotator votes per record (4 of 5 decide)");
  votes->add_option("--in", in, "JSONL file with id and votes")->required();
  votes->add_option("--out", dest, "output JSONL (default: standard output)");
  votes->callback([&] { action = [&] { return cmd_votes(in, dest, out, log); }; });

  auto* preprocess = app.add_subcommand("preprocess", "run the preprocessing pipeline and emit token sequences");
  preprocess->add_option("--in", in, "corpus file")->required();
  preprocess->add_option("--out", dest, "output JSONL (default: standard output)");
  preprocess->add_option("--condition", condition, "raw, preproc-keep-emoji or preproc-delete-emoji");
  preprocess->add_option("--emoji", emoji, "keep or delete");
  flags.attach(preprocess, false);
  preprocess->callback([&] { action = [&] { return cmd_preprocess(in, dest, condition, emoji, flags, out, log); }; });

  auto* train = app.add_subcommand("train", "train one classifier under one condition and save a model bundle");
  train->add_option("--data", data, "labeled corpus")->required();
  train->add_option("--model", model, "svm, nb, knn, cnn or lstm")->required();
  condition = "preproc-delete-emoji";
  train->add_option("--condition", condition, "raw, preproc-keep-emoji or preproc-delete-emoji")->capture_default_str();
  train->add_option("--out", dest, "model bundle path")->required();
  flags.attach(train, true);
  train->callback([&] { action = [&] { return cmd_train(data, model, condition, dest, flags, out, log); }; });

  auto* predict = app.add_subcommand("predict", "label the comments of a file with a trained bundle");
  predict->add_option("--model", model, "model bundle")->required()->check(CLI::ExistingFile);
  predict->add_option("--in", in, "corpus file; labels are ignored")->required();
  predict->add_option("--out", dest, "output JSONL (default: standard output)");
  predict->callback([&] { action = [&] { return cmd_predict(model, in, dest, out, log); }; });

  auto* evaluate = app.add_subcommand("evaluate", "metrics of a trained bundle on a labeled file");
  evaluate->add_option("--model", model, "model bundle")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--data", data, "labeled corpus")->required();
  evaluate->add_option("--out", dest, "metrics JSON (default: standard output)");
  evaluate->callback([&] { action = [&] { return cmd_evaluate(model, data, dest, out, log); }; });

  auto* experiment = app.add_subcommand("experiment", "the three-condition, five-model evaluation grid");
  experiment->add_option("--data", data, "labeled corpus")->required();
  experiment->add_option("--out", dest, "Markdown report (default: standard output)");
  experiment->add_option("--json", json_path, "JSON report");
  flags.attach(experiment, true);
  experiment->callback([&] { action = [&] { return cmd_experiment(data, dest, json_path, flags, out, log); }; });

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the neural gradients");
  std::uint64_t seed = kDefaultSeed;
  double epsilon = 1e-5;
  std::size_t length = 5;
  gradcheck->add_option("--model", model, "cnn or lstm")->required();
  gradcheck->add_option("--seed", seed, "initialization and input seed")->capture_default_str();
  gradcheck->add_option("--epsilon", epsilon, "finite-difference step")->capture_default_str();
  gradcheck->add_option("--length", length, "tokens in the probe document")->capture_default_str();
  gradcheck->callback([&] { action = [&] { return cmd_gradcheck(model, seed, epsilon, length, out); }; });

  auto* synth = app.add_subcommand("synth", "emit the bundled synthetic corpus");
  std::size_t count = 400;
  synth->add_option("--out", dest, "output file (.jsonl or .csv; default: JSONL on standard output)");
  synth->add_option("--seed", seed, "generator seed")->capture_default_str();
  synth->add_option("--count", count, "number of comments")->capture_default_str();
  synth->callback([&] { action = [&] { return cmd_synth(dest, seed, count, out, log); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const ConfigError& e) {
    err << "darija: configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "darija: data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::logic_error& e) {
    err << "darija: internal error: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    err << "darija: error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace darija::cli
