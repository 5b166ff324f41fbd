#include "darija/unicode.hpp"

#include "darija/error.hpp"

#include <array>
#include <utility>

namespace darija::unicode {
namespace {

struct Range {
  char32_t lo;
  char32_t hi;
};

template <std::size_t N>
bool in_ranges(const std::array<Range, N>& ranges, char32_t cp) {
  for (const auto& r : ranges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

// Scripts that show up in Maghrebi social media text, plus the common
// alphabetic blocks. Not a full Unicode Alphabetic table.
constexpr std::array kLetterRanges{
    Range{0x0041, 0x005A}, Range{0x0061, 0x007A}, Range{0x00AA, 0x00AA},
    Range{0x00B5, 0x00B5}, Range{0x00BA, 0x00BA}, Range{0x00C0, 0x00D6},
    Range{0x00D8, 0x00F6}, Range{0x00F8, 0x024F}, Range{0x0250, 0x02AF},
    Range{0x0370, 0x03FF}, Range{0x0400, 0x052F}, Range{0x0531, 0x0587},
    Range{0x05D0, 0x05EA}, Range{0x0620, 0x064A}, Range{0x066E, 0x066F},
    Range{0x0671, 0x06D3}, Range{0x06D5, 0x06D5}, Range{0x06E5, 0x06E6},
    Range{0x06EE, 0x06EF}, Range{0x06FA, 0x06FC}, Range{0x06FF, 0x06FF},
    Range{0x0750, 0x077F}, Range{0x08A0, 0x08C9}, Range{0x0900, 0x0939},
    Range{0x10A0, 0x10FF}, Range{0x1100, 0x11FF}, Range{0x1E00, 0x1FFF},
    Range{0x2D30, 0x2D6F}, Range{0x3040, 0x30FF}, Range{0x3400, 0x4DBF},
    Range{0x4E00, 0x9FFF}, Range{0xAC00, 0xD7A3}, Range{0xFB50, 0xFDFB},
    Range{0xFE70, 0xFEFC}, Range{0xFF21, 0xFF3A}, Range{0xFF41, 0xFF5A},
};

constexpr std::array kMarkRanges{
    Range{0x0300, 0x036F}, Range{0x0483, 0x0489}, Range{0x0591, 0x05BD},
    Range{0x0610, 0x061A}, Range{0x064B, 0x065F}, Range{0x0670, 0x0670},
    Range{0x06D6, 0x06DC}, Range{0x06DF, 0x06E4}, Range{0x06E7, 0x06E8},
    Range{0x06EA, 0x06ED}, Range{0x08CA, 0x08FF}, Range{0x1AB0, 0x1AFF},
    Range{0x1DC0, 0x1DFF}, Range{0x20D0, 0x20FF}, Range{0xFE20, 0xFE2F},
};

constexpr std::array kEmojiRanges{
    Range{0x1F300, 0x1F5FF}, Range{0x1F600, 0x1F64F}, Range{0x1F680, 0x1F6FF},
    Range{0x1F900, 0x1F9FF}, Range{0x2600, 0x27BF},
};

constexpr std::array kWhitespaceRanges{
    Range{0x0009, 0x000D}, Range{0x0020, 0x0020}, Range{0x0085, 0x0085},
    Range{0x00A0, 0x00A0}, Range{0x1680, 0x1680}, Range{0x2000, 0x200A},
    Range{0x2028, 0x2029}, Range{0x202F, 0x202F}, Range{0x205F, 0x205F},
    Range{0x3000, 0x3000},
};

}  // namespace

std::optional<std::size_t> find_invalid(std::string_view utf8) {
  std::size_t i = 0;
  const std::size_t n = utf8.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    if (b0 < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(utf8[i + k]);
      if ((b & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::nullopt;
}

std::u32string decode(std::string_view utf8) {
  if (auto bad = find_invalid(utf8)) {
    throw DataError("invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    const std::size_t len = (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3 : 4;
    char32_t cp = b0 & (len == 2 ? 0x1F : len == 3 ? 0x0F : 0x07);
    for (std::size_t k = 1; k < len; ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(utf8[i + k]) & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 2);
  for (char32_t cp : text) append_utf8(out, cp);
  return out;
}

bool is_whitespace(char32_t cp) { return in_ranges(kWhitespaceRanges, cp); }

bool is_digit(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= 0x0660 && cp <= 0x0669) ||
         (cp >= 0x06F0 && cp <= 0x06F9);
}

bool is_letter(char32_t cp) {
  if (cp == 0x00D7 || cp == 0x00F7) return false;  // multiplication/division signs
  return in_ranges(kLetterRanges, cp);
}

bool is_mark(char32_t cp) { return in_ranges(kMarkRanges, cp); }

bool is_word_char(char32_t cp) { return is_letter(cp) || is_digit(cp) || is_mark(cp); }

bool is_sentence_punct(char32_t cp) {
  switch (cp) {
    case U'.':
    case U',':
    case U'!':
    case U'?':
    case 0x060C:  // Arabic comma
    case 0x061B:  // Arabic semicolon
    case 0x061F:  // Arabic question mark
      return true;
    default:
      return false;
  }
}

bool is_emoji_base(char32_t cp) {
  if (cp >= 0x1F3FB && cp <= 0x1F3FF) return false;  // skin tones only extend
  return in_ranges(kEmojiRanges, cp);
}

bool is_emoji_extender(char32_t cp) {
  return cp == kVariationSelector16 || (cp >= 0x1F3FB && cp <= 0x1F3FF);
}

bool is_emoji_component(char32_t cp) {
  return is_emoji_base(cp) || is_emoji_extender(cp) || cp == kZeroWidthJoiner;
}

bool is_arabic_diacritic(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670;
}

char32_t to_lower_latin(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if ((cp >= 0x00C0 && cp <= 0x00DE) && cp != 0x00D7) return cp + 32;
  if (cp >= 0x0100 && cp <= 0x0137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x0139 && cp <= 0x0148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x014A && cp <= 0x0177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x0178) return 0x00FF;
  if (cp == 0x0179 || cp == 0x017B || cp == 0x017D) return cp + 1;
  return cp;
}

std::size_t emoji_cluster_length(std::u32string_view text, std::size_t pos) {
  if (pos >= text.size() || !is_emoji_base(text[pos])) return 0;
  std::size_t i = pos + 1;
  for (;;) {
    while (i < text.size() && is_emoji_extender(text[i])) ++i;
    if (i + 1 < text.size() && text[i] == kZeroWidthJoiner && is_emoji_base(text[i + 1])) {
      i += 2;
      continue;
    }
    break;
  }
  return i - pos;
}

}  // namespace darija::unicode
