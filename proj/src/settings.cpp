#include "darija/settings.hpp"

#include "darija/error.hpp"
#include "darija/text_io.hpp"

#include <fstream>
#include <sstream>

namespace darija {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_switch(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("'" + std::string(key) + "' expects on or off, got '" + std::string(v) + "'");
}

template <typename F>
auto parse_value(std::string_view key, std::string_view v, F&& parse) {
  try {
    return parse(v);
  } catch (const DataError& e) {
    throw ConfigError("'" + std::string(key) + "': " + e.what());
  }
}

std::size_t size_value(std::string_view key, std::string_view v) {
  return parse_value(key, v, [](std::string_view s) { return text_io::parse_size(s); });
}

double real_value(std::string_view key, std::string_view v) {
  return parse_value(key, v, [](std::string_view s) { return text_io::parse_double(s); });
}

std::vector<std::size_t> size_list(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    auto comma = v.find(',', pos);
    if (comma == std::string_view::npos) comma = v.size();
    out.push_back(size_value(key, trim(v.substr(pos, comma - pos))));
    pos = comma + 1;
  }
  return out;
}

const char* onoff(bool b) { return b ? "on" : "off"; }

}  // namespace

void Settings::set(std::string_view key, std::string_view value) {
  key = trim(key);
  const auto v = trim(value);
  if (key == "seed") {
    seed = size_value(key, v);
  } else if (key == "train_fraction") {
    train_fraction = parse_value(key, v, [](std::string_view s) { return Fraction::parse(s); });
  } else if (key == "ngram") {
    const auto m = parse_ngram_mode(v);
    if (!m) throw ConfigError("'ngram' expects unigram, bigram or both, got '" + std::string(v) + "'");
    ngram = *m;
  } else if (key == "min_df") {
    min_df = size_value(key, v);
  } else if (key == "emoji_mode") {
    if (v == "keep") {
      emoji_mode = EmojiMode::Keep;
    } else if (v == "delete") {
      emoji_mode = EmojiMode::Delete;
    } else {
      throw ConfigError("'emoji_mode' expects keep or delete, got '" + std::string(v) + "'");
    }
  } else if (key == "stopwords_arabic") {
    stopwords_arabic = std::filesystem::path(std::string(v));
  } else if (key == "stopwords_latin") {
    stopwords_latin = std::filesystem::path(std::string(v));
  } else if (key == "stage.clean") {
    stages.clean = parse_switch(key, v);
  } else if (key == "stage.tokenize") {
    stages.tokenize = parse_switch(key, v);
  } else if (key == "stage.normalize") {
    stages.normalize = parse_switch(key, v);
  } else if (key == "stage.emoji") {
    stages.emoji = parse_switch(key, v);
  } else if (key == "stage.stopwords") {
    stages.stopwords = parse_switch(key, v);
  } else if (key == "stage.dedup") {
    stages.dedup = parse_switch(key, v);
  } else if (key == "nb.alpha") {
    nb_alpha = real_value(key, v);
  } else if (key == "nb.features") {
    if (v == "counts") {
      nb_tfidf = false;
    } else if (v == "tfidf") {
      nb_tfidf = true;
    } else {
      throw ConfigError("'nb.features' expects counts or tfidf, got '" + std::string(v) + "'");
    }
  } else if (key == "knn.k") {
    knn_k = size_value(key, v);
  } else if (key == "svm.lambda") {
    svm_lambda = real_value(key, v);
  } else if (key == "svm.epochs") {
    svm_epochs = size_value(key, v);
  } else if (key == "cnn.filter_sizes") {
    cnn.filter_sizes = size_list(key, v);
  } else if (key == "cnn.filters") {
    cnn.filters_per_size = size_value(key, v);
  } else if (key == "cnn.max_len") {
    cnn.max_len = size_value(key, v);
  } else if (key == "cnn.embed_dim") {
    cnn.embed_dim = size_value(key, v);
  } else if (key == "cnn.fc_dim") {
    cnn.fc_dim = size_value(key, v);
  } else if (key == "cnn.dropout") {
    cnn.dropout = real_value(key, v);
  } else if (key == "cnn.num_classes") {
    cnn.num_classes = size_value(key, v);
  } else if (key == "lstm.hidden") {
    lstm.hidden = size_value(key, v);
  } else if (key == "lstm.max_len") {
    lstm.max_len = size_value(key, v);
  } else if (key == "lstm.embed_dim") {
    lstm.embed_dim = size_value(key, v);
  } else if (key == "lstm.fc_dim") {
    lstm.fc_dim = size_value(key, v);
  } else if (key == "lstm.dropout") {
    lstm.dropout = real_value(key, v);
  } else if (key == "lstm.num_classes") {
    lstm.num_classes = size_value(key, v);
  } else if (key == "train.learning_rate") {
    train.learning_rate = real_value(key, v);
  } else if (key == "train.beta1") {
    train.beta1 = real_value(key, v);
  } else if (key == "train.beta2") {
    train.beta2 = real_value(key, v);
  } else if (key == "train.epsilon") {
    train.epsilon = real_value(key, v);
  } else if (key == "train.batch_size") {
    train.batch_size = size_value(key, v);
  } else if (key == "train.epochs") {
    train.epochs = size_value(key, v);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

void Settings::apply(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void Settings::apply_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    apply(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void Settings::validate() const {
  train_fraction.validate();
  if (min_df < 1) throw ConfigError("min_df must be at least 1");
  if (!(nb_alpha > 0.0)) throw ConfigError("nb.alpha must be positive");
  if (knn_k < 1) throw ConfigError("knn.k must be at least 1");
  if (!(svm_lambda > 0.0)) throw ConfigError("svm.lambda must be positive");
  if (svm_epochs < 1) throw ConfigError("svm.epochs must be at least 1");
  PipelineConfig p;
  p.stages = stages;
  p.validate();
  cnn.validate();
  lstm.validate();
  train_config().validate();
}

neural::TrainConfig Settings::train_config() const {
  auto t = train;
  t.seed = seed;
  return t;
}

PipelineConfig Settings::pipeline(EmojiMode mode) const {
  PipelineConfig p = PipelineConfig::full(mode);
  p.stages = stages;
  if (stopwords_arabic) p.stopwords_arabic = load_stopwords(*stopwords_arabic);
  if (stopwords_latin) p.stopwords_latin = load_stopwords(*stopwords_latin);
  p.validate();
  return p;
}

std::string Settings::canonical() const {
  std::ostringstream os;
  os << "seed=" << seed << '\n'
     << "train_fraction=" << train_fraction.num << '/' << train_fraction.den << '\n'
     << "ngram=" << to_string(ngram) << '\n'
     << "min_df=" << min_df << '\n'
     << "emoji_mode=" << to_string(emoji_mode) << '\n';
  if (stopwords_arabic) os << "stopwords_arabic=" << stopwords_arabic->generic_string() << '\n';
  if (stopwords_latin) os << "stopwords_latin=" << stopwords_latin->generic_string() << '\n';
  os << "stage.clean=" << onoff(stages.clean) << '\n'
     << "stage.tokenize=" << onoff(stages.tokenize) << '\n'
     << "stage.normalize=" << onoff(stages.normalize) << '\n'
     << "stage.emoji=" << onoff(stages.emoji) << '\n'
     << "stage.stopwords=" << onoff(stages.stopwords) << '\n'
     << "stage.dedup=" << onoff(stages.dedup) << '\n'
     << "nb.alpha=" << text_io::format_double(nb_alpha) << '\n'
     << "nb.features=" << (nb_tfidf ? "tfidf" : "counts") << '\n'
     << "knn.k=" << knn_k << '\n'
     << "svm.lambda=" << text_io::format_double(svm_lambda) << '\n'
     << "svm.epochs=" << svm_epochs << '\n'
     << "cnn.filter_sizes=";
  for (std::size_t i = 0; i < cnn.filter_sizes.size(); ++i) os << (i ? "," : "") << cnn.filter_sizes[i];
  os << '\n'
     << "cnn.filters=" << cnn.filters_per_size << '\n'
     << "cnn.max_len=" << cnn.max_len << '\n'
     << "cnn.embed_dim=" << cnn.embed_dim << '\n'
     << "cnn.fc_dim=" << cnn.fc_dim << '\n'
     << "cnn.dropout=" << text_io::format_double(cnn.dropout) << '\n'
     << "cnn.num_classes=" << cnn.num_classes << '\n'
     << "lstm.hidden=" << lstm.hidden << '\n'
     << "lstm.max_len=" << lstm.max_len << '\n'
     << "lstm.embed_dim=" << lstm.embed_dim << '\n'
     << "lstm.fc_dim=" << lstm.fc_dim << '\n'
     << "lstm.dropout=" << text_io::format_double(lstm.dropout) << '\n'
     << "lstm.num_classes=" << lstm.num_classes << '\n'
     << "train.learning_rate=" << text_io::format_double(train.learning_rate) << '\n'
     << "train.beta1=" << text_io::format_double(train.beta1) << '\n'
     << "train.beta2=" << text_io::format_double(train.beta2) << '\n'
     << "train.epsilon=" << text_io::format_double(train.epsilon) << '\n'
     << "train.batch_size=" << train.batch_size << '\n'
     << "train.epochs=" << train.epochs << '\n';
  return os.str();
}

std::string fingerprint(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace darija
