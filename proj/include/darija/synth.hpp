#pragma once

#include "darija/corpus.hpp"

#include <cstdint>

namespace darija {

struct SynthOptions {
  std::size_t count = 400;
  std::uint64_t seed = 42;
};

/// Balanced two-class corpus of Darija-like comments in Arabic script,
/// Arabizi and a mix of both. Every comment carries one or two polarity
/// words (including negated forms such as مزوينش next to زوين) among neutral
/// filler, plus social-media noise: links, time tags, usernames, numbers,
/// letter elongation, harakat, alef variants, capitals and emojis. Each
/// comment has a gold label and five annotator votes agreeing at least 4 to 1.
Corpus synthesize_corpus(const SynthOptions& options = {});

}  // namespace darija
