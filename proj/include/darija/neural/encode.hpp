#pragma once

#include "darija/features.hpp"

#include <vector>

namespace darija::neural {

/// Embedding row indices for one document: vocabulary index + 1, with 0 the
/// padding row.
struct EncodedDoc {
  std::vector<int> indices;  // exactly max_len entries
  std::size_t true_length = 0;

  /// Every token was out of vocabulary.
  bool all_oov() const { return true_length == 0; }
};

/// Maps tokens through a unigram vocabulary (OOV tokens dropped), truncates
/// to max_len and right-pads with 0.
EncodedDoc encode_doc(const TokenSequence& doc, const Vocabulary& vocab, std::size_t max_len);

}  // namespace darija::neural
