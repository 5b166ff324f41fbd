#pragma once

#include "darija/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace darija {

enum class TokenKind : std::uint8_t { Word, Emoji };

struct Token {
  std::string text;
  TokenKind kind = TokenKind::Word;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenSequence {
  std::vector<Token> tokens;
  std::string source_id;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  /// Token texts joined by single spaces.
  std::string joined() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

enum class EmojiMode : std::uint8_t { Keep, Delete };
std::string_view to_string(EmojiMode m);

struct StageSet {
  bool clean = true;
  bool tokenize = true;
  bool normalize = true;
  bool emoji = true;
  bool stopwords = true;
  bool dedup = true;

  friend bool operator==(const StageSet&, const StageSet&) = default;
};

/// Preprocessing configuration. Stop-word entries are stored normalized so
/// they compare directly against normalized tokens.
struct PipelineConfig {
  EmojiMode emoji_mode = EmojiMode::Keep;
  std::set<std::string> stopwords_arabic;
  std::set<std::string> stopwords_latin;
  StageSet stages{};

  /// Tokenize only.
  static PipelineConfig raw();
  /// All six stages with the bundled stop-word lists.
  static PipelineConfig full(EmojiMode mode);

  /// Throws ConfigError when tokenize is off while a later stage is on.
  void validate() const;
  /// Canonical text form; stable across runs, used for fingerprints and
  /// model bundles.
  std::string canonical() const;
  /// Inverse of canonical(). Throws ConfigError on unknown or missing keys.
  static PipelineConfig from_canonical(std::string_view text);

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Step 1. Removes, in order: URLs, @usernames, time tags, numeric dates,
/// standalone digit runs, and special characters; then collapses whitespace.
/// Digits attached to letters ("9ard", "3jbni") survive. Removed spans are
/// replaced by a space, so neighbouring text is never glued together.
std::string clean_text(std::string_view text);

/// Step 2. Splits on whitespace and sentence punctuation (which is dropped);
/// every emoji cluster becomes its own Emoji token.
TokenSequence tokenize(std::string_view text, std::string source_id = {});

/// Step 3 for one word: strip harakat and tatweel, fold alef variants to
/// bare alef, ta marbuta to ha, lowercase Latin, then collapse runs of three
/// or more identical scalars to one.
std::string normalize_word(std::string_view word);
/// Words that normalize to nothing (pure tatweel or harakat) are dropped.
TokenSequence normalize_tokens(TokenSequence seq);

/// Step 4.
TokenSequence apply_emoji_mode(TokenSequence seq, EmojiMode mode);

/// Step 5. Only Word tokens are candidates.
TokenSequence remove_stopwords(TokenSequence seq, const PipelineConfig& config);

/// Step 6. First occurrence of each joined token string wins.
std::vector<TokenSequence> dedup_corpus(std::vector<TokenSequence> docs);

/// Steps 1-5 on a single comment, honoring the enabled stages.
TokenSequence process_text(std::string_view text, std::string source_id,
                           const PipelineConfig& config);

struct PipelineResult {
  std::vector<TokenSequence> docs;
  std::size_t dropped_empty = 0;
  std::size_t dropped_duplicates = 0;
};

/// All enabled stages over a corpus. Comments left without tokens are
/// dropped and counted; survivors keep input order.
PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& config);

/// One token per line, '#' starts a comment, blank lines ignored. Entries
/// come back normalized.
std::set<std::string> parse_stopwords(std::string_view content);
std::set<std::string> load_stopwords(const std::filesystem::path& path);

const std::set<std::string>& default_stopwords_arabic();
const std::set<std::string>& default_stopwords_latin();

}  // namespace darija
