#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace darija::unicode {

/// Decodes UTF-8 into scalar values. Throws DataError on ill-formed input
/// (overlong forms, surrogates, truncated sequences, values past U+10FFFF).
std::u32string decode(std::string_view utf8);

/// Byte offset of the first ill-formed sequence, or nullopt when valid.
std::optional<std::size_t> find_invalid(std::string_view utf8);

std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp);
bool is_digit(char32_t cp);
bool is_letter(char32_t cp);
/// Combining marks attached to letters, including Arabic harakat.
bool is_mark(char32_t cp);
bool is_word_char(char32_t cp);

/// Sentence punctuation: . , ! ? and the Arabic comma, semicolon and
/// question mark.
bool is_sentence_punct(char32_t cp);

/// Scalar that can start an emoji cluster.
bool is_emoji_base(char32_t cp);
/// Scalar that extends an emoji cluster: VS16 or a skin-tone modifier.
bool is_emoji_extender(char32_t cp);
inline constexpr char32_t kZeroWidthJoiner = 0x200D;
inline constexpr char32_t kVariationSelector16 = 0xFE0F;
/// Any scalar that may appear inside an emoji cluster.
bool is_emoji_component(char32_t cp);

bool is_arabic_diacritic(char32_t cp);
inline constexpr char32_t kTatweel = 0x0640;

/// Lowercases Latin letters (ASCII, Latin-1, Latin Extended-A). Every other
/// scalar maps to itself.
char32_t to_lower_latin(char32_t cp);

/// Length of the emoji cluster starting at `pos`, or 0 if `pos` does not
/// start one. A cluster is a base, optional extenders, and any number of
/// ZWJ-joined continuations.
std::size_t emoji_cluster_length(std::u32string_view text, std::size_t pos);

}  // namespace darija::unicode
