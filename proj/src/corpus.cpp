#include "darija/corpus.hpp"

#include "darija/error.hpp"
#include "darija/rng.hpp"
#include "darija/unicode.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace darija {

using nlohmann::json;

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool blank(std::string_view text) {
  for (char32_t cp : unicode::decode(text)) {
    if (!unicode::is_whitespace(cp)) return false;
  }
  return true;
}

[[noreturn]] void fail_at(std::size_t line, std::string_view field, const std::string& what) {
  std::string msg = "line " + std::to_string(line);
  if (!field.empty()) msg += ", field '" + std::string(field) + "'";
  throw DataError(msg + ": " + what);
}

std::size_t line_of_offset(std::string_view content, std::size_t offset) {
  return 1 + static_cast<std::size_t>(std::count(content.begin(), content.begin() + offset, '\n'));
}

void check_utf8(std::string_view content) {
  if (auto bad = unicode::find_invalid(content)) {
    throw DataError("line " + std::to_string(line_of_offset(content, *bad)) +
                    ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
}

class IdRegistry {
 public:
  void add(const std::string& id, std::size_t line) {
    auto [it, inserted] = first_line_.emplace(id, line);
    if (!inserted) {
      throw DataError("duplicate id '" + id + "' at line " + std::to_string(line) +
                      " (first occurrence at line " + std::to_string(it->second) + ")");
    }
  }

 private:
  std::unordered_map<std::string, std::size_t> first_line_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
}

LabeledComment comment_from_json(const json& rec, std::size_t line) {
  if (!rec.is_object()) fail_at(line, "", "record is not a JSON object");
  LabeledComment c;
  auto id = rec.find("id");
  if (id == rec.end() || !id->is_string()) fail_at(line, "id", "missing or not a string");
  c.id = id->get<std::string>();
  if (c.id.empty()) fail_at(line, "id", "empty id");

  auto text = rec.find("text");
  if (text == rec.end() || !text->is_string()) fail_at(line, "text", "missing or not a string");
  c.raw_text = text->get<std::string>();
  if (blank(c.raw_text)) fail_at(line, "text", "empty after trimming");

  if (auto it = rec.find("label"); it != rec.end() && !it->is_null()) {
    if (!it->is_string()) fail_at(line, "label", "not a string");
    c.label = parse_label(it->get<std::string>());
    if (!c.label) fail_at(line, "label", "unknown label '" + it->get<std::string>() + "'");
  }
  if (auto it = rec.find("script"); it != rec.end() && !it->is_null()) {
    if (!it->is_string()) fail_at(line, "script", "not a string");
    c.script = parse_script(it->get<std::string>());
    if (!c.script) fail_at(line, "script", "unknown script '" + it->get<std::string>() + "'");
  }
  if (auto it = rec.find("votes"); it != rec.end() && !it->is_null()) {
    if (!it->is_array()) fail_at(line, "votes", "not an array");
    if (it->size() != kVotesPerComment) {
      fail_at(line, "votes", "expected 5 votes, got " + std::to_string(it->size()));
    }
    std::vector<Label> votes;
    for (const auto& v : *it) {
      std::optional<Label> l;
      if (v.is_string()) l = parse_label(v.get<std::string>());
      if (!l) fail_at(line, "votes", "invalid vote " + v.dump());
      votes.push_back(*l);
    }
    c.votes = std::move(votes);
  }
  return c;
}

// RFC 4180 records. Returns (first line number, fields) per record.
std::vector<std::pair<std::size_t, std::vector<std::string>>> split_csv(std::string_view s) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::vector<std::string> fields;
  std::string field;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool in_quotes = false;
  bool any = false;
  auto end_record = [&] {
    fields.push_back(std::move(field));
    field.clear();
    const bool only_empty = fields.size() == 1 && fields[0].empty();
    if (!only_empty) records.emplace_back(record_line, std::move(fields));
    fields.clear();
    any = false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (!any) record_line = line, any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_record();
      ++line;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) throw DataError("line " + std::to_string(record_line) + ": unterminated quoted field");
  if (any) end_record();
  return records;
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

}  // namespace

std::string_view to_string(Label l) { return l == Label::Positive ? "positive" : "negative"; }

std::optional<Label> parse_label(std::string_view s) {
  const auto v = lower_ascii(s);
  if (v == "positive" || v == "p" || v == "pos") return Label::Positive;
  if (v == "negative" || v == "n" || v == "neg") return Label::Negative;
  return std::nullopt;
}

std::string_view to_string(Script s) {
  switch (s) {
    case Script::Arabic: return "arabic";
    case Script::Latin: return "latin";
    case Script::Mixed: return "mixed";
  }
  return "?";
}

std::optional<Script> parse_script(std::string_view s) {
  const auto v = lower_ascii(s);
  if (v == "arabic") return Script::Arabic;
  if (v == "latin") return Script::Latin;
  if (v == "mixed") return Script::Mixed;
  return std::nullopt;
}

std::string_view to_string(VoteOutcome v) {
  switch (v) {
    case VoteOutcome::Negative: return "negative";
    case VoteOutcome::Positive: return "positive";
    case VoteOutcome::Undecided: return "undecided";
  }
  return "?";
}

VoteOutcome aggregate_votes(std::span<const Label> votes) {
  if (votes.size() != kVotesPerComment) {
    throw DataError("vote aggregation needs exactly 5 votes, got " + std::to_string(votes.size()));
  }
  const auto pos = static_cast<std::size_t>(std::count(votes.begin(), votes.end(), Label::Positive));
  if (pos >= kVotesToDecide) return VoteOutcome::Positive;
  if (votes.size() - pos >= kVotesToDecide) return VoteOutcome::Negative;
  return VoteOutcome::Undecided;
}

std::optional<Label> LabeledComment::effective_label() const {
  if (label) return label;
  if (votes) {
    switch (aggregate_votes(*votes)) {
      case VoteOutcome::Positive: return Label::Positive;
      case VoteOutcome::Negative: return Label::Negative;
      case VoteOutcome::Undecided: break;
    }
  }
  return std::nullopt;
}

bool LabeledComment::undecided() const {
  return !label && votes && aggregate_votes(*votes) == VoteOutcome::Undecided;
}

Corpus::Corpus(std::vector<LabeledComment> comments, std::string provenance)
    : comments_(std::move(comments)), provenance_(std::move(provenance)) {
  IdRegistry ids;
  for (std::size_t i = 0; i < comments_.size(); ++i) {
    if (comments_[i].votes && comments_[i].votes->size() != kVotesPerComment) {
      throw DataError("comment '" + comments_[i].id + "' has " +
                      std::to_string(comments_[i].votes->size()) + " votes, expected 5");
    }
    ids.add(comments_[i].id, i + 1);
  }
}

Corpus Corpus::modeling_subset() const {
  std::vector<LabeledComment> kept;
  for (const auto& c : comments_) {
    if (auto l = c.effective_label()) {
      kept.push_back(c);
      kept.back().label = l;
    }
  }
  return Corpus(std::move(kept), provenance_);
}

std::optional<CorpusFormat> format_from_path(const std::filesystem::path& path) {
  const auto ext = lower_ascii(path.extension().string());
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return CorpusFormat::Jsonl;
  if (ext == ".csv") return CorpusFormat::Csv;
  return std::nullopt;
}

Corpus parse_jsonl(std::string_view content, std::string provenance) {
  check_utf8(content);
  std::vector<LabeledComment> comments;
  IdRegistry ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_at(line_no, "", std::string("malformed JSON: ") + e.what());
    }
    auto c = comment_from_json(rec, line_no);
    ids.add(c.id, line_no);
    comments.push_back(std::move(c));
  }
  return Corpus(std::move(comments), std::move(provenance));
}

Corpus parse_csv(std::string_view content, std::string provenance) {
  check_utf8(content);
  auto records = split_csv(content);
  if (records.empty()) return Corpus({}, std::move(provenance));
  const auto& header = records.front().second;
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower_ascii(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  const auto id_col = column("id");
  const auto text_col = column("text");
  const auto label_col = column("label");
  const auto script_col = column("script");
  if (!id_col || !text_col) fail_at(1, "", "CSV header must name 'id' and 'text' columns");

  std::vector<LabeledComment> comments;
  IdRegistry ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [line, fields] = records[r];
    auto get = [&](std::optional<std::size_t> col) -> std::string {
      return col && *col < fields.size() ? fields[*col] : std::string{};
    };
    if (fields.size() < header.size()) {
      fail_at(line, "", "expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    }
    LabeledComment c;
    c.id = get(id_col);
    if (c.id.empty()) fail_at(line, "id", "empty id");
    c.raw_text = get(text_col);
    if (blank(c.raw_text)) fail_at(line, "text", "empty after trimming");
    if (auto v = get(label_col); !v.empty()) {
      c.label = parse_label(v);
      if (!c.label) fail_at(line, "label", "unknown label '" + v + "'");
    }
    if (auto v = get(script_col); !v.empty()) {
      c.script = parse_script(v);
      if (!c.script) fail_at(line, "script", "unknown script '" + v + "'");
    }
    ids.add(c.id, line);
    comments.push_back(std::move(c));
  }
  return Corpus(std::move(comments), std::move(provenance));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  const auto content = read_file(path);
  try {
    return format == CorpusFormat::Jsonl ? parse_jsonl(content, path.string())
                                         : parse_csv(content, path.string());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& c : corpus.comments()) {
    json rec = json::object();
    rec["id"] = c.id;
    rec["text"] = c.raw_text;
    if (c.label) rec["label"] = to_string(*c.label);
    if (c.script) rec["script"] = to_string(*c.script);
    if (c.votes) {
      json votes = json::array();
      for (Label v : *c.votes) votes.push_back(to_string(v));
      rec["votes"] = std::move(votes);
    }
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::string to_csv(const Corpus& corpus) {
  std::string out = "id,text,label,script\n";
  for (const auto& c : corpus.comments()) {
    out += csv_escape(c.id) + ',' + csv_escape(c.raw_text) + ',';
    if (c.label) out += to_string(*c.label);
    out += ',';
    if (c.script) out += to_string(*c.script);
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  write_file(path, format == CorpusFormat::Jsonl ? to_jsonl(corpus) : to_csv(corpus));
}

Fraction Fraction::parse(std::string_view text) {
  auto bad = [&] { return ConfigError("invalid fraction '" + std::string(text) + "'"); };
  Fraction f;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto a = text.substr(0, slash), b = text.substr(slash + 1);
    if (std::from_chars(a.data(), a.data() + a.size(), f.num).ec != std::errc{} ||
        std::from_chars(b.data(), b.data() + b.size(), f.den).ec != std::errc{}) {
      throw bad();
    }
  } else {
    auto dot = text.find('.');
    std::string digits(text.substr(0, dot == std::string_view::npos ? text.size() : dot));
    std::string frac = dot == std::string_view::npos ? "" : std::string(text.substr(dot + 1));
    if (frac.size() > 9) throw bad();
    const auto all = digits + frac;
    if (all.empty() || !std::all_of(all.begin(), all.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw bad();
    }
    if (std::from_chars(all.data(), all.data() + all.size(), f.num).ec != std::errc{}) throw bad();
    f.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) f.den *= 10;
  }
  if (f.den == 0) throw bad();
  const auto g = std::gcd(f.num, f.den);
  if (g > 0) f.num /= g, f.den /= g;
  f.validate();
  return f;
}

void Fraction::validate() const {
  if (den > 1'000'000'000) throw ConfigError("train fraction denominator too large");
  if (den == 0 || num == 0 || num >= den) {
    throw ConfigError("train fraction must lie strictly between 0 and 1, got " +
                      std::to_string(num) + "/" + std::to_string(den));
  }
}

Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  spec.train_fraction.validate();
  if (corpus.empty()) throw DataError("cannot split an empty corpus");

  std::vector<std::string> unlabeled;
  std::array<std::vector<std::size_t>, kNumLabels> by_class;
  std::vector<std::size_t> everything;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto l = corpus[i].effective_label();
    if (!l) {
      unlabeled.push_back(corpus[i].id);
      continue;
    }
    by_class[index_of(*l)].push_back(i);
    everything.push_back(i);
  }
  if (!unlabeled.empty()) {
    std::string ids;
    for (const auto& id : unlabeled) ids += (ids.empty() ? "" : ", ") + id;
    throw DataError("split requires labeled comments; unlabeled or undecided: " + ids);
  }

  const auto& frac = spec.train_fraction;
  Rng rng(spec.seed);
  const auto n = static_cast<std::uint64_t>(corpus.size());
  // round(num * n / den), half away from zero.
  const auto train_total = (2 * frac.num * n + frac.den) / (2 * frac.den);

  std::vector<char> in_train(corpus.size(), 0);
  if (spec.stratified) {
    std::array<std::uint64_t, kNumLabels> quota{};
    std::array<std::uint64_t, kNumLabels> remainder{};
    std::uint64_t assigned = 0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      const auto nc = static_cast<std::uint64_t>(by_class[c].size());
      quota[c] = frac.num * nc / frac.den;
      remainder[c] = frac.num * nc % frac.den;
      assigned += quota[c];
    }
    std::array<std::size_t, kNumLabels> order{};
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < train_total && k < kNumLabels; ++k) {
      const auto c = order[k];
      if (remainder[c] > 0) ++quota[c], ++assigned;
    }
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      auto members = by_class[c];
      rng.shuffle(members);
      for (std::size_t k = 0; k < quota[c]; ++k) in_train[members[k]] = 1;
    }
  } else {
    rng.shuffle(everything);
    for (std::size_t k = 0; k < train_total; ++k) in_train[everything[k]] = 1;
  }

  std::vector<LabeledComment> train, test;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_train[i] ? train : test).push_back(corpus[i]);
  }
  return {Corpus(std::move(train), corpus.provenance()), Corpus(std::move(test), corpus.provenance())};
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.total = corpus.size();
  std::size_t length_sum = 0;
  for (const auto& c : corpus.comments()) {
    if (c.undecided()) {
      ++s.undecided;
    } else if (auto l = c.effective_label()) {
      ++(*l == Label::Positive ? s.positive : s.negative);
    } else {
      ++s.unlabeled;
    }
    if (!c.script) {
      ++s.unknown_script;
    } else {
      switch (*c.script) {
        case Script::Arabic: ++s.arabic; break;
        case Script::Latin: ++s.latin; break;
        case Script::Mixed: ++s.mixed; break;
      }
    }
    length_sum += unicode::decode(c.raw_text).size();
  }
  s.mean_length = s.total == 0 ? 0.0 : static_cast<double>(length_sum) / static_cast<double>(s.total);
  return s;
}

std::string to_json(const CorpusStats& s) {
  json j = {
      {"total", s.total},
      {"labels", {{"positive", s.positive}, {"negative", s.negative}, {"undecided", s.undecided},
                  {"unlabeled", s.unlabeled}}},
      {"scripts", {{"arabic", s.arabic}, {"latin", s.latin}, {"mixed", s.mixed},
                   {"unknown", s.unknown_script}}},
      {"mean_length", s.mean_length},
  };
  return j.dump(2) + "\n";
}

}  // namespace darija
