#include "darija/neural/encode.hpp"

namespace darija::neural {

EncodedDoc encode_doc(const TokenSequence& doc, const Vocabulary& vocab, std::size_t max_len) {
  EncodedDoc out;
  out.indices.assign(max_len, 0);
  for (const auto& tok : doc.tokens) {
    if (out.true_length == max_len) break;
    if (auto idx = vocab.index_of(tok.text)) out.indices[out.true_length++] = static_cast<int>(*idx) + 1;
  }
  return out;
}

}  // namespace darija::neural
