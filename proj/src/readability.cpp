#include "argmine/agreement.hpp"
#include "argmine/error.hpp"
#include "argmine/utf8.hpp"

namespace argmine {

// Vowel groups, minus a word-final silent 'e', at least one.
std::size_t count_syllables(std::string_view word) {
  const auto cps = utf8::decode(word);
  std::size_t groups = 0;
  bool in_group = false;
  char32_t last_letter = 0;
  for (char32_t cp : cps) {
    const bool v = utf8::is_vowel(cp);
    if (v && !in_group) ++groups;
    in_group = v;
    if (utf8::is_alphabetic(cp)) last_letter = cp;
  }
  if ((last_letter == 'e' || last_letter == 'E') && groups > 1) --groups;
  return groups == 0 ? 1 : groups;
}

TextCounts count_text(const std::vector<std::vector<std::string_view>>& sentences) {
  TextCounts c;
  c.sentences = sentences.size();
  for (const auto& sent : sentences) {
    for (auto tok : sent) {
      std::size_t letters = 0, digits = 0;
      for (char32_t cp : utf8::decode(tok)) {
        if (utf8::is_alphabetic(cp)) ++letters;
        else if (utf8::is_digit(cp)) ++digits;
      }
      if (letters + digits == 0) continue;
      ++c.words;
      c.letters += letters;
      c.digits += digits;
      c.syllables += count_syllables(tok);
      if (letters > 6) ++c.long_words;
    }
  }
  return c;
}

Readability readability(const TextCounts& c) {
  if (c.sentences == 0) throw UndefinedMetric("readability undefined: no sentences");
  if (c.words == 0) throw UndefinedMetric("readability undefined: no words");
  const double w = static_cast<double>(c.words);
  const double s = static_cast<double>(c.sentences);
  const double letters = static_cast<double>(c.letters);
  Readability r;
  r.ari = 4.71 * ((letters + static_cast<double>(c.digits)) / w) + 0.5 * (w / s) - 21.43;
  const double L = letters / w * 100.0;
  const double S = s / w * 100.0;
  r.coleman_liau = 0.0588 * L - 0.296 * S - 15.8;
  r.flesch = 206.835 - 1.015 * (w / s) - 84.6 * (static_cast<double>(c.syllables) / w);
  r.lix = w / s + 100.0 * static_cast<double>(c.long_words) / w;
  return r;
}

Readability readability(const Document& doc) {
  std::vector<std::vector<std::string_view>> sents;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) sents.push_back(doc.sentence_tokens(s));
  return readability(count_text(sents));
}

}  // namespace argmine
