#include "darija/synth.hpp"

#include "darija/error.hpp"
#include "darija/rng.hpp"
#include "darija/unicode.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace darija {
namespace {

using Words = std::vector<std::string_view>;

const Words kArabicPositive{"زوين", "مزيان", "واعر", "عجبني", "ممتاز", "زوينة", "نقي", "فرحان"};
const Words kArabicNegative{"مزوينش", "ماعجبنيش", "خايب", "مامزيانش", "خسارة", "مقلق", "حشومة", "عيان"};
const Words kLatinPositive{"zwin", "mzyan", "wa3r", "3jbni", "top", "nadi", "bravo", "merci"};
const Words kLatinNegative{"mazwinch", "ma3jbnich", "khayb", "mamzyanch", "7chouma", "khasra", "nul", "m9ale9"};
const Words kArabicFiller{"هادشي", "الفيديو", "ديال", "هاد", "البرنامج", "اليوم", "بزاف", "دابا",
                          "صراحة", "المغرب", "الاغنية", "إلى", "أنا", "الحلقة", "في", "و"};
const Words kLatinFiller{"had", "lvideo", "dyal", "lprogramme", "bzaf", "daba", "sara7a", "wallah",
                         "lyoum", "lmaghrib", "hadchi", "lproduit", "f", "c'est", "vraiment", "lhal9a"};
const Words kPositiveEmoji{"😍", "😀", "👍", "❤️", "🥰"};
const Words kNegativeEmoji{"😡", "👎", "😞", "💔", "🤮"};
const Words kNeutralEmoji{"😂", "🎶", "🔥"};
const Words kUsers{"@simo_23", "@hiba", "@ayoub.tv", "@rachid"};
const Words kHarakat{"َ", "ُ", "ِ", "ّ", "ً"};

std::string_view pick(Rng& rng, const Words& words) { return words[rng.uniform_index(words.size())]; }

/// Repeats one letter of the word three to five times.
std::string elongate(Rng& rng, std::string_view word) {
  auto cps = unicode::decode(word);
  std::vector<std::size_t> letters;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (unicode::is_letter(cps[i])) letters.push_back(i);
  }
  if (letters.empty()) return std::string(word);
  const auto at = letters[rng.uniform_index(letters.size())];
  cps.insert(cps.begin() + static_cast<std::ptrdiff_t>(at), 2 + rng.uniform_index(3), cps[at]);
  return unicode::encode(cps);
}

/// Inserts a haraka after the first letter.
std::string add_haraka(Rng& rng, std::string_view word) {
  auto cps = unicode::decode(word);
  if (cps.size() < 2) return std::string(word);
  const auto mark = unicode::decode(pick(rng, kHarakat));
  cps.insert(cps.begin() + 1, mark.begin(), mark.end());
  return unicode::encode(cps);
}

std::string capitalize(Rng& rng, std::string word) {
  const bool all = rng.bernoulli(0.5);
  for (std::size_t i = 0; i < word.size(); ++i) {
    auto& c = word[i];
    if ((all || i == 0) && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return word;
}

std::string polarity_word(Rng& rng, Label label, bool arabic) {
  const bool pos = label == Label::Positive;
  std::string w(pick(rng, arabic ? (pos ? kArabicPositive : kArabicNegative) : (pos ? kLatinPositive : kLatinNegative)));
  if (rng.bernoulli(0.3)) w = elongate(rng, w);
  if (arabic && rng.bernoulli(0.2)) w = add_haraka(rng, w);
  if (!arabic && rng.bernoulli(0.2)) w = capitalize(rng, w);
  return w;
}

std::string filler_word(Rng& rng, bool arabic) {
  std::string w(pick(rng, arabic ? kArabicFiller : kLatinFiller));
  if (arabic && rng.bernoulli(0.1)) w = add_haraka(rng, w);
  return w;
}

std::string time_tag(Rng& rng) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%u:%02u", static_cast<unsigned>(rng.uniform_index(12)),
                static_cast<unsigned>(rng.uniform_index(60)));
  return buf;
}

std::string make_text(Rng& rng, Label label, Script script) {
  std::vector<std::string> words;
  const std::size_t polar = 1 + rng.uniform_index(2);
  for (std::size_t i = 0; i < polar; ++i) {
    const bool arabic = script == Script::Arabic || (script == Script::Mixed && rng.bernoulli(0.5));
    words.push_back(polarity_word(rng, label, arabic));
  }
  const std::size_t fill = 2 + rng.uniform_index(4);
  for (std::size_t i = 0; i < fill; ++i) {
    const bool arabic = script == Script::Arabic || (script == Script::Mixed && rng.bernoulli(0.5));
    words.push_back(filler_word(rng, arabic));
  }
  rng.shuffle(words);

  if (rng.bernoulli(0.4)) {
    const double r = rng.uniform01();
    const auto& set = r < 0.8 ? (label == Label::Positive ? kPositiveEmoji : kNegativeEmoji) : kNeutralEmoji;
    std::string emoji(pick(rng, set));
    if (rng.bernoulli(0.3)) {
      words.back() += emoji;
    } else {
      words.push_back(emoji);
    }
  }
  if (rng.bernoulli(0.2)) words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(words.size() + 1)), time_tag(rng));
  if (rng.bernoulli(0.1)) words.insert(words.begin(), std::string(pick(rng, kUsers)));
  if (rng.bernoulli(0.1)) words.push_back(std::to_string(1990 + rng.uniform_index(35)));
  if (rng.bernoulli(0.15)) words.push_back("https://youtu.be/v" + std::to_string(rng.uniform_index(100000)));
  if (rng.bernoulli(0.25)) words.back() += rng.bernoulli(0.5) ? "!!" : "...";

  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  return text;
}

std::vector<Label> make_votes(Rng& rng, Label label) {
  std::vector<Label> votes(kVotesPerComment, label);
  if (rng.bernoulli(0.3)) {
    votes[rng.uniform_index(votes.size())] = label == Label::Positive ? Label::Negative : Label::Positive;
  }
  return votes;
}

}  // namespace

Corpus synthesize_corpus(const SynthOptions& options) {
  if (options.count < 2) throw ConfigError("synthetic corpus needs at least two comments");
  Rng rng(options.seed);
  std::vector<Label> labels;
  for (std::size_t i = 0; i < options.count; ++i) labels.push_back(i % 2 == 0 ? Label::Positive : Label::Negative);
  rng.shuffle(labels);

  std::vector<LabeledComment> comments;
  comments.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    LabeledComment c;
    char id[32];
    std::snprintf(id, sizeof id, "s%04zu", i + 1);
    c.id = id;
    const double r = rng.uniform01();
    const Script script = r < 0.4 ? Script::Arabic : (r < 0.8 ? Script::Latin : Script::Mixed);
    c.raw_text = make_text(rng, labels[i], script);
    c.label = labels[i];
    c.script = script;
    c.votes = make_votes(rng, labels[i]);
    comments.push_back(std::move(c));
  }
  return Corpus(std::move(comments), "synthetic corpus, seed " + std::to_string(options.seed));
}

}  // namespace darija
