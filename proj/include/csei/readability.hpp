#pragma once

#include <cstdint>
#include <string_view>

#include "csei/text.hpp"

namespace csei {

namespace detail {

inline bool is_vowel_letter(char c) {
  const char l = to_lower_ascii(c);
  return l == 'a' || l == 'e' || l == 'i' || l == 'o' || l == 'u' || l == 'y';
}

}  // namespace detail

// Maximal vowel-group runs (a e i o u y), minus one for a terminal silent
// 'e' when more than one run exists; never less than 1 for non-empty input.
inline int count_syllables(std::string_view word) {
  if (word.empty()) return 0;
  int runs = 0;
  bool in_run = false;
  for (char c : word) {
    const bool vowel = detail::is_vowel_letter(c);
    if (vowel && !in_run) ++runs;
    in_run = vowel;
  }
  if (runs > 1 && to_lower_ascii(word.back()) == 'e') --runs;
  return runs < 1 ? 1 : runs;
}

struct ReadabilityScore {
  double score = 0.0;
  bool degenerate = false;  // zero words; score pinned to 0
};

// Flesch Reading Ease. Words are maximal alphabetic runs; sentences are
// runs of '.', '!', '?' (at least one sentence whenever a word exists).
inline ReadabilityScore flesch_reading_ease(std::string_view raw_text) {
  std::int64_t words = 0, syllables = 0, sentence_marks = 0;
  std::size_t i = 0;
  bool in_mark_run = false;
  while (i < raw_text.size()) {
    const char c = raw_text[i];
    if (is_ascii_alpha(c)) {
      std::size_t start = i;
      while (i < raw_text.size() && is_ascii_alpha(raw_text[i])) ++i;
      ++words;
      syllables += count_syllables(raw_text.substr(start, i - start));
      in_mark_run = false;
      continue;
    }
    const bool mark = c == '.' || c == '!' || c == '?';
    if (mark && !in_mark_run) ++sentence_marks;
    in_mark_run = mark;
    ++i;
  }
  if (words == 0) return {0.0, true};
  const double sentences =
      static_cast<double>(sentence_marks < 1 ? 1 : sentence_marks);
  const double w = static_cast<double>(words);
  return {206.835 - 1.015 * (w / sentences) -
              84.6 * (static_cast<double>(syllables) / w),
          false};
}

}  // namespace csei
