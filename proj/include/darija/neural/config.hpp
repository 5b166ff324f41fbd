#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace darija::neural {

struct CnnConfig {
  std::vector<std::size_t> filter_sizes{3, 4, 5};
  std::size_t filters_per_size = 100;  // m
  std::size_t max_len = 64;            // n
  std::size_t embed_dim = 100;         // d
  std::size_t fc_dim = 64;
  double dropout = 0.5;
  std::size_t num_classes = 2;

  /// Length of each branch's feature map: n - s + 1.
  std::size_t feature_map_length(std::size_t filter_size) const { return max_len - filter_size + 1; }
  /// Width of the concatenated pooled vector: |sizes| * m.
  std::size_t pooled_width() const { return filter_sizes.size() * filters_per_size; }

  void validate() const;
  std::string canonical() const;
  friend bool operator==(const CnnConfig&, const CnnConfig&) = default;
};

struct LstmConfig {
  std::size_t hidden = 64;  // h, per direction
  std::size_t max_len = 64;
  std::size_t embed_dim = 100;
  std::size_t fc_dim = 64;
  double dropout = 0.5;
  std::size_t num_classes = 2;

  /// Forward and backward final states side by side: 2h.
  std::size_t concat_width() const { return 2 * hidden; }

  void validate() const;
  std::string canonical() const;
  friend bool operator==(const LstmConfig&, const LstmConfig&) = default;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  std::uint64_t seed = 42;

  void validate() const;
  std::string canonical() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Small configurations for gradient verification: |V| = 20, d = 8, n = 7,
/// fc = 6, two classes; the CNN uses sizes {2, 3, 4} with m = 4 and the
/// BiLSTM h = 5.
inline constexpr std::size_t kTinyVocab = 20;
CnnConfig tiny_cnn_config();
LstmConfig tiny_lstm_config();

}  // namespace darija::neural
