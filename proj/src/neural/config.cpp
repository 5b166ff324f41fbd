#include "darija/neural/config.hpp"

#include "darija/error.hpp"
#include "darija/text_io.hpp"

#include <sstream>

namespace darija::neural {

namespace {

void check_dropout(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
}

}  // namespace

void CnnConfig::validate() const {
  if (filter_sizes.empty()) throw ConfigError("CNN needs at least one filter size");
  if (max_len < 1) throw ConfigError("CNN max_len must be positive");
  for (auto s : filter_sizes) {
    if (s < 1 || s > max_len) {
      throw ConfigError("CNN filter size " + std::to_string(s) + " must lie in [1, max_len=" + std::to_string(max_len) + "]");
    }
  }
  if (filters_per_size < 1 || embed_dim < 1 || fc_dim < 1) throw ConfigError("CNN dimensions must be positive");
  if (num_classes < 2) throw ConfigError("CNN needs at least two output classes");
  check_dropout(dropout);
}

std::string CnnConfig::canonical() const {
  std::ostringstream os;
  os << "filter_sizes=";
  for (std::size_t i = 0; i < filter_sizes.size(); ++i) os << (i ? "," : "") << filter_sizes[i];
  os << " filters=" << filters_per_size << " max_len=" << max_len << " embed_dim=" << embed_dim
     << " fc_dim=" << fc_dim << " dropout=" << text_io::format_double(dropout) << " classes=" << num_classes;
  return os.str();
}

void LstmConfig::validate() const {
  if (hidden < 1) throw ConfigError("LSTM hidden size must be positive");
  if (max_len < 1 || embed_dim < 1 || fc_dim < 1) throw ConfigError("LSTM dimensions must be positive");
  if (num_classes < 2) throw ConfigError("LSTM needs at least two output classes");
  check_dropout(dropout);
}

std::string LstmConfig::canonical() const {
  std::ostringstream os;
  os << "hidden=" << hidden << " max_len=" << max_len << " embed_dim=" << embed_dim << " fc_dim=" << fc_dim
     << " dropout=" << text_io::format_double(dropout) << " classes=" << num_classes;
  return os.str();
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("Adam betas must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be positive");
  if (epochs < 1) throw ConfigError("training needs at least one epoch");
}

std::string TrainConfig::canonical() const {
  std::ostringstream os;
  os << "lr=" << text_io::format_double(learning_rate) << " beta1=" << text_io::format_double(beta1)
     << " beta2=" << text_io::format_double(beta2) << " eps=" << text_io::format_double(epsilon)
     << " batch=" << batch_size << " epochs=" << epochs << " seed=" << seed;
  return os.str();
}

CnnConfig tiny_cnn_config() {
  CnnConfig c;
  c.filter_sizes = {2, 3, 4};
  c.filters_per_size = 4;
  c.max_len = 7;
  c.embed_dim = 8;
  c.fc_dim = 6;
  return c;
}

LstmConfig tiny_lstm_config() {
  LstmConfig c;
  c.hidden = 5;
  c.max_len = 7;
  c.embed_dim = 8;
  c.fc_dim = 6;
  return c;
}

}  // namespace darija::neural
