#include "darija/preprocess.hpp"

#include "darija/error.hpp"
#include "darija/unicode.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace darija {

namespace detail {
extern const std::string_view kDefaultStopwordsArabic;
extern const std::string_view kDefaultStopwordsLatin;
}  // namespace detail

namespace {

using unicode::is_digit;
using unicode::is_word_char;

bool ascii_alnum(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
}

bool starts_with_ci(std::u32string_view s, std::size_t pos, std::u32string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (unicode::to_lower_latin(s[pos + k]) != prefix[k]) return false;
  }
  return true;
}

void blank_out(std::u32string& s, std::size_t from, std::size_t to) {
  std::fill(s.begin() + static_cast<std::ptrdiff_t>(from), s.begin() + static_cast<std::ptrdiff_t>(to), U' ');
}

std::size_t skip_to_space(const std::u32string& s, std::size_t i) {
  while (i < s.size() && !unicode::is_whitespace(s[i])) ++i;
  return i;
}

void remove_urls(std::u32string& s) {
  static constexpr std::array<std::u32string_view, 4> kPrefixes{U"http://", U"https://", U"ftp://", U"www."};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && ascii_alnum(s[i - 1])) continue;
    for (auto p : kPrefixes) {
      if (starts_with_ci(s, i, p)) {
        const auto end = skip_to_space(s, i);
        blank_out(s, i, end);
        i = end;
        break;
      }
    }
  }
}

bool username_char(char32_t c) {
  return unicode::is_letter(c) || is_digit(c) || c == U'_' || c == U'.' || c == U'-';
}

void remove_usernames(std::u32string& s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] != U'@' || !username_char(s[i + 1])) continue;
    std::size_t end = i + 1;
    while (end < s.size() && username_char(s[end])) ++end;
    blank_out(s, i, end);
    i = end - 1;
  }
}

// Length of a digit run of exactly min..max digits at pos, else 0.
std::size_t digits_at(const std::u32string& s, std::size_t pos, std::size_t min, std::size_t max) {
  std::size_t n = 0;
  while (pos + n < s.size() && is_digit(s[pos + n])) ++n;
  return n >= min && n <= max ? n : 0;
}

bool left_boundary(const std::u32string& s, std::size_t i) { return i == 0 || !is_word_char(s[i - 1]); }
bool right_boundary(const std::u32string& s, std::size_t i) { return i >= s.size() || !is_word_char(s[i]); }

// H:MM or HH:MM, optionally :SS.
std::size_t match_time(const std::u32string& s, std::size_t i) {
  const auto h = digits_at(s, i, 1, 2);
  if (h == 0) return 0;
  std::size_t p = i + h;
  if (p >= s.size() || s[p] != U':' || digits_at(s, p + 1, 2, 2) == 0) return 0;
  p += 3;
  if (p < s.size() && s[p] == U':' && digits_at(s, p + 1, 2, 2) != 0) p += 3;
  return right_boundary(s, p) ? p - i : 0;
}

// D(D)/D(D)/DDDD, or the same with '-'.
std::size_t match_date(const std::u32string& s, std::size_t i) {
  const auto d = digits_at(s, i, 1, 2);
  if (d == 0) return 0;
  std::size_t p = i + d;
  if (p >= s.size() || (s[p] != U'/' && s[p] != U'-')) return 0;
  const char32_t sep = s[p++];
  const auto m = digits_at(s, p, 1, 2);
  if (m == 0) return 0;
  p += m;
  if (p >= s.size() || s[p] != sep) return 0;
  const auto y = digits_at(s, p + 1, 4, 4);
  if (y == 0) return 0;
  p += 1 + y;
  return right_boundary(s, p) ? p - i : 0;
}

template <typename Matcher>
void remove_pattern(std::u32string& s, Matcher match) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_digit(s[i]) || !left_boundary(s, i)) continue;
    if (const auto len = match(s, i); len > 0) {
      blank_out(s, i, i + len);
      i += len - 1;
    }
  }
}

// Digit runs not touching a letter, mark or digit. "9ard" keeps its 9.
void remove_standalone_numbers(std::u32string& s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < s.size() && is_digit(s[end])) ++end;
    const bool glued = (i > 0 && is_word_char(s[i - 1])) || (end < s.size() && is_word_char(s[end]));
    if (!glued) blank_out(s, i, end);
    i = end;
  }
}

void remove_special(std::u32string& s) {
  for (auto& c : s) {
    const bool keep = is_word_char(c) || unicode::is_whitespace(c) || unicode::is_sentence_punct(c) ||
                      unicode::is_emoji_component(c);
    if (!keep) c = U' ';
  }
}

std::u32string collapse_whitespace(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  bool pending = false;
  for (char32_t c : s) {
    if (unicode::is_whitespace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(U' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string TokenSequence::joined() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

std::string_view to_string(EmojiMode m) { return m == EmojiMode::Keep ? "keep" : "delete"; }

PipelineConfig PipelineConfig::raw() {
  PipelineConfig c;
  c.stages = StageSet{false, true, false, false, false, false};
  return c;
}

PipelineConfig PipelineConfig::full(EmojiMode mode) {
  PipelineConfig c;
  c.emoji_mode = mode;
  c.stopwords_arabic = default_stopwords_arabic();
  c.stopwords_latin = default_stopwords_latin();
  return c;
}

void PipelineConfig::validate() const {
  const bool later = stages.normalize || stages.emoji || stages.stopwords || stages.dedup;
  if (!stages.tokenize && later) {
    throw ConfigError("the tokenize stage cannot be disabled while later stages are enabled");
  }
}

std::string PipelineConfig::canonical() const {
  std::ostringstream os;
  auto onoff = [](bool b) { return b ? "on" : "off"; };
  os << "stage.clean=" << onoff(stages.clean) << '\n'
     << "stage.tokenize=" << onoff(stages.tokenize) << '\n'
     << "stage.normalize=" << onoff(stages.normalize) << '\n'
     << "stage.emoji=" << onoff(stages.emoji) << '\n'
     << "stage.stopwords=" << onoff(stages.stopwords) << '\n'
     << "stage.dedup=" << onoff(stages.dedup) << '\n'
     << "emoji_mode=" << to_string(emoji_mode) << '\n';
  os << "stopwords_arabic=";
  for (const auto& w : stopwords_arabic) os << w << ' ';
  os << "\nstopwords_latin=";
  for (const auto& w : stopwords_latin) os << w << ' ';
  os << '\n';
  return os.str();
}

PipelineConfig PipelineConfig::from_canonical(std::string_view text) {
  PipelineConfig c;
  std::set<std::string> seen;
  auto words = [](std::string_view v) {
    std::set<std::string> out;
    std::size_t pos = 0;
    while (pos < v.size()) {
      auto sp = v.find(' ', pos);
      if (sp == std::string_view::npos) sp = v.size();
      if (sp > pos) out.emplace(v.substr(pos, sp - pos));
      pos = sp + 1;
    }
    return out;
  };
  auto flag = [](std::string_view key, std::string_view v) {
    if (v == "on") return true;
    if (v == "off") return false;
    throw ConfigError("pipeline: '" + std::string(key) + "' expects on or off");
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("pipeline: expected key=value, got '" + std::string(line) + "'");
    const auto key = line.substr(0, eq);
    const auto v = line.substr(eq + 1);
    if (key == "stage.clean") {
      c.stages.clean = flag(key, v);
    } else if (key == "stage.tokenize") {
      c.stages.tokenize = flag(key, v);
    } else if (key == "stage.normalize") {
      c.stages.normalize = flag(key, v);
    } else if (key == "stage.emoji") {
      c.stages.emoji = flag(key, v);
    } else if (key == "stage.stopwords") {
      c.stages.stopwords = flag(key, v);
    } else if (key == "stage.dedup") {
      c.stages.dedup = flag(key, v);
    } else if (key == "emoji_mode") {
      if (v != "keep" && v != "delete") throw ConfigError("pipeline: emoji_mode expects keep or delete");
      c.emoji_mode = v == "keep" ? EmojiMode::Keep : EmojiMode::Delete;
    } else if (key == "stopwords_arabic") {
      c.stopwords_arabic = words(v);
    } else if (key == "stopwords_latin") {
      c.stopwords_latin = words(v);
    } else {
      throw ConfigError("pipeline: unknown key '" + std::string(key) + "'");
    }
    seen.emplace(key);
  }
  if (seen.size() != 9) throw ConfigError("pipeline: incomplete description");
  c.validate();
  return c;
}

std::string clean_text(std::string_view text) {
  auto s = unicode::decode(text);
  remove_urls(s);
  remove_usernames(s);
  remove_pattern(s, match_time);
  remove_pattern(s, match_date);
  remove_standalone_numbers(s);
  remove_special(s);
  return unicode::encode(collapse_whitespace(s));
}

TokenSequence tokenize(std::string_view text, std::string source_id) {
  const auto s = unicode::decode(text);
  TokenSequence seq;
  seq.source_id = std::move(source_id);
  std::u32string word;
  auto flush = [&] {
    if (!word.empty()) seq.tokens.push_back({unicode::encode(word), TokenKind::Word});
    word.clear();
  };
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t c = s[i];
    if (unicode::is_whitespace(c) || unicode::is_sentence_punct(c)) {
      flush();
      ++i;
    } else if (const auto len = unicode::emoji_cluster_length(s, i); len > 0) {
      flush();
      seq.tokens.push_back({unicode::encode(std::u32string_view(s).substr(i, len)), TokenKind::Emoji});
      i += len;
    } else {
      word.push_back(c);
      ++i;
    }
  }
  flush();
  return seq;
}

std::string normalize_word(std::string_view word) {
  const auto in = unicode::decode(word);
  std::u32string folded;
  folded.reserve(in.size());
  for (char32_t c : in) {
    if (unicode::is_arabic_diacritic(c) || c == unicode::kTatweel) continue;
    switch (c) {
      case 0x0622:  // alef with madda
      case 0x0623:  // alef with hamza above
      case 0x0625:  // alef with hamza below
        c = 0x0627;
        break;
      case 0x0629:  // ta marbuta
        c = 0x0647;
        break;
      default:
        c = unicode::to_lower_latin(c);
    }
    folded.push_back(c);
  }
  std::u32string out;
  out.reserve(folded.size());
  std::size_t i = 0;
  while (i < folded.size()) {
    std::size_t run = 1;
    while (i + run < folded.size() && folded[i + run] == folded[i]) ++run;
    out.append(run >= 3 ? 1 : run, folded[i]);
    i += run;
  }
  return unicode::encode(out);
}

TokenSequence normalize_tokens(TokenSequence seq) {
  std::vector<Token> out;
  out.reserve(seq.tokens.size());
  for (auto& t : seq.tokens) {
    if (t.kind == TokenKind::Word) {
      t.text = normalize_word(t.text);
      if (t.text.empty()) continue;
    }
    out.push_back(std::move(t));
  }
  seq.tokens = std::move(out);
  return seq;
}

TokenSequence apply_emoji_mode(TokenSequence seq, EmojiMode mode) {
  if (mode == EmojiMode::Delete) {
    std::erase_if(seq.tokens, [](const Token& t) { return t.kind == TokenKind::Emoji; });
  }
  return seq;
}

TokenSequence remove_stopwords(TokenSequence seq, const PipelineConfig& config) {
  std::erase_if(seq.tokens, [&](const Token& t) {
    return t.kind == TokenKind::Word &&
           (config.stopwords_arabic.contains(t.text) || config.stopwords_latin.contains(t.text));
  });
  return seq;
}

std::vector<TokenSequence> dedup_corpus(std::vector<TokenSequence> docs) {
  std::unordered_set<std::string> seen;
  std::vector<TokenSequence> out;
  out.reserve(docs.size());
  for (auto& d : docs) {
    if (seen.insert(d.joined()).second) out.push_back(std::move(d));
  }
  return out;
}

TokenSequence process_text(std::string_view text, std::string source_id, const PipelineConfig& config) {
  config.validate();
  if (!config.stages.tokenize) {
    throw ConfigError("token sequences require the tokenize stage");
  }
  const auto& st = config.stages;
  auto seq = tokenize(st.clean ? clean_text(text) : std::string(text), std::move(source_id));
  if (st.normalize) seq = normalize_tokens(std::move(seq));
  if (st.emoji) seq = apply_emoji_mode(std::move(seq), config.emoji_mode);
  if (st.stopwords) seq = remove_stopwords(std::move(seq), config);
  return seq;
}

PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& config) {
  PipelineResult result;
  result.docs.reserve(corpus.size());
  for (const auto& c : corpus.comments()) {
    auto seq = process_text(c.raw_text, c.id, config);
    if (seq.empty()) {
      ++result.dropped_empty;
      continue;
    }
    result.docs.push_back(std::move(seq));
  }
  if (config.stages.dedup) {
    const auto before = result.docs.size();
    result.docs = dedup_corpus(std::move(result.docs));
    result.dropped_duplicates = before - result.docs.size();
  }
  return result;
}

std::set<std::string> parse_stopwords(std::string_view content) {
  if (auto bad = unicode::find_invalid(content)) {
    throw DataError("stop-word list: invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  std::set<std::string> words;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    auto line = content.substr(pos, nl - pos);
    pos = nl + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto cps = unicode::decode(line);
    auto first = std::find_if_not(cps.begin(), cps.end(), unicode::is_whitespace);
    auto last = std::find_if(first, cps.end(), unicode::is_whitespace);
    if (first == last) continue;
    if (auto w = normalize_word(unicode::encode(std::u32string(first, last))); !w.empty()) {
      words.insert(std::move(w));
    }
  }
  return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open stop-word list '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_stopwords(ss.str());
}

const std::set<std::string>& default_stopwords_arabic() {
  static const auto words = parse_stopwords(detail::kDefaultStopwordsArabic);
  return words;
}

const std::set<std::string>& default_stopwords_latin() {
  static const auto words = parse_stopwords(detail::kDefaultStopwordsLatin);
  return words;
}

}  // namespace darija
