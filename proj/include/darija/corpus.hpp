#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace darija {

/// Sentiment class. Negative orders before Positive; every tie-break in the
/// library resolves toward the smaller label.
enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

inline constexpr std::array<Label, 2> kAllLabels{Label::Negative, Label::Positive};
inline constexpr std::size_t kNumLabels = kAllLabels.size();

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }
constexpr Label label_from_index(std::size_t i) { return static_cast<Label>(i); }

std::string_view to_string(Label l);
/// Accepts "positive"/"negative" in any case, or "p"/"n". Nullopt otherwise.
std::optional<Label> parse_label(std::string_view s);

enum class Script : std::uint8_t { Arabic, Latin, Mixed };
std::string_view to_string(Script s);
std::optional<Script> parse_script(std::string_view s);

/// Outcome of the five-annotator vote.
enum class VoteOutcome : std::uint8_t { Negative, Positive, Undecided };
std::string_view to_string(VoteOutcome v);

inline constexpr std::size_t kVotesPerComment = 5;
inline constexpr std::size_t kVotesToDecide = 4;

/// A label wins iff at least four of the five votes name it. Throws
/// DataError unless exactly five votes are given.
VoteOutcome aggregate_votes(std::span<const Label> votes);

struct LabeledComment {
  std::string id;
  std::string raw_text;
  std::optional<Label> label;
  std::optional<Script> script;
  std::optional<std::vector<Label>> votes;

  /// The explicit label if present, else the vote decision. Nullopt for
  /// unlabeled or undecided comments.
  std::optional<Label> effective_label() const;
  bool undecided() const;

  friend bool operator==(const LabeledComment&, const LabeledComment&) = default;
};

/// Comments in insertion order with unique ids. Read-only after construction.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<LabeledComment> comments, std::string provenance = {});

  std::span<const LabeledComment> comments() const { return comments_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t size() const { return comments_.size(); }
  bool empty() const { return comments_.empty(); }
  const LabeledComment& operator[](std::size_t i) const { return comments_[i]; }

  /// Comments with an effective label, with the label field filled in.
  /// Undecided and unlabeled comments are left out.
  Corpus modeling_subset() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<LabeledComment> comments_;
  std::string provenance_;
};

enum class CorpusFormat { Jsonl, Csv };
std::optional<CorpusFormat> format_from_path(const std::filesystem::path& path);

Corpus parse_jsonl(std::string_view content, std::string provenance = {});
Corpus parse_csv(std::string_view content, std::string provenance = {});
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

std::string to_jsonl(const Corpus& corpus);
/// CSV carries id,text,label,script only; votes are not representable.
std::string to_csv(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);

/// Exact train fraction num/den, strictly inside (0, 1).
struct Fraction {
  std::uint64_t num = 4;
  std::uint64_t den = 5;

  /// Parses "0.8", "4/5" or ".25".
  static Fraction parse(std::string_view text);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  void validate() const;
};

struct SplitSpec {
  Fraction train_fraction{};
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct Split {
  Corpus train;
  Corpus test;
};

/// Seeded split. Every comment must carry an effective label.
///
/// The train size is round(fraction * N). Stratified splits give each class
/// floor(fraction * n_c) train slots and hand the leftover slots to classes
/// by largest remainder (equal remainders ordered by a seeded shuffle). Each
/// class is Fisher-Yates shuffled and the first slots go to train. Both halves
/// keep corpus order.
Split stratified_split(const Corpus& corpus, const SplitSpec& spec);

struct CorpusStats {
  std::size_t total = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t undecided = 0;
  std::size_t unlabeled = 0;
  std::size_t arabic = 0;
  std::size_t latin = 0;
  std::size_t mixed = 0;
  std::size_t unknown_script = 0;
  /// Mean length of raw_text in Unicode scalar values.
  double mean_length = 0.0;
};

CorpusStats corpus_stats(const Corpus& corpus);
std::string to_json(const CorpusStats& stats);

}  // namespace darija
