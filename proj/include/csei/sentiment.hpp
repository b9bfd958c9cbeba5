#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "csei/lexicon.hpp"
#include "csei/text.hpp"

namespace csei {

namespace detail {

inline constexpr double kCapsIncrement = 0.733;
inline constexpr double kNegationScalar = -0.74;
inline constexpr double kExclaimIncrement = 0.292;
inline constexpr int kExclaimCap = 4;
inline constexpr int kModifierWindow = 3;

// Leading/trailing punctuation is context ("NOW!" hits the lexicon as
// "now"); interior punctuation stays ("can't").
inline std::string_view strip_punct(std::string_view tok) {
  std::size_t b = 0, e = tok.size();
  auto is_word_char = [](char c) {
    return is_ascii_alpha(c) || is_ascii_digit(c);
  };
  while (b < e && !is_word_char(tok[b])) ++b;
  while (e > b && !is_word_char(tok[e - 1])) --e;
  return tok.substr(b, e - b);
}

inline bool is_all_caps(std::string_view tok) {
  bool has_alpha = false;
  for (char c : tok) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') has_alpha = true;
  }
  return has_alpha;
}

}  // namespace detail

// Lexicon-and-rules polarity score on raw (uncleaned) text.
//
// Per lexicon token: ALL-CAPS emphasis (±0.733, only when the text mixes
// cased styles), then booster increments from up to three preceding tokens
// (signed with the target's valence, damped ×0.95 / ×0.90 at distances two
// and three, caps-emphasized boosters push ±0.733 harder), then a single
// ×(−0.74) flip if any of the three preceding tokens is a negator.
// Exclamation marks add ±0.292 each (at most four) toward the sum's sign.
// The adjusted sum S maps into [−1,1] via S/sqrt(S²+alpha).
inline double compound_sentiment(std::string_view raw_text,
                                 const Lexicon& lexicon, double alpha = 15.0) {
  const std::vector<std::string> tokens = split_whitespace(raw_text);
  if (tokens.empty()) return 0.0;

  std::vector<std::string_view> stripped(tokens.size());
  std::vector<std::string> lowered(tokens.size());
  std::size_t caps_tokens = 0, cased_tokens = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    stripped[i] = detail::strip_punct(tokens[i]);
    lowered[i] = to_lower(stripped[i]);
    bool any_alpha = false;
    for (char c : stripped[i]) any_alpha |= is_ascii_alpha(c);
    if (any_alpha) {
      ++cased_tokens;
      if (detail::is_all_caps(stripped[i])) ++caps_tokens;
    }
  }
  const bool mixed_case = caps_tokens > 0 && caps_tokens < cased_tokens;

  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (lexicon.boosters.contains(lowered[i])) continue;  // modifier, not hit
    const auto hit = lexicon.entries.find(lowered[i]);
    if (hit == lexicon.entries.end()) continue;
    double valence = hit->second;
    if (valence == 0.0) continue;  // coverage-only entry; modifiers have no
                                   // polarity to amplify

    if (mixed_case && detail::is_all_caps(stripped[i])) {
      valence += valence > 0 ? detail::kCapsIncrement
                             : (valence < 0 ? -detail::kCapsIncrement : 0.0);
    }

    bool negated = false;
    for (int back = 1; back <= detail::kModifierWindow; ++back) {
      if (static_cast<std::size_t>(back) > i) break;
      const std::size_t j = i - static_cast<std::size_t>(back);
      if (lexicon.negators.contains(lowered[j])) negated = true;
      const auto boost = lexicon.boosters.find(lowered[j]);
      if (boost == lexicon.boosters.end()) continue;
      double inc = boost->second;
      if (mixed_case && detail::is_all_caps(stripped[j])) {
        inc += inc > 0 ? detail::kCapsIncrement
                       : (inc < 0 ? -detail::kCapsIncrement : 0.0);
      }
      if (back == 2) inc *= 0.95;
      if (back == 3) inc *= 0.90;
      valence += valence < 0 ? -inc : inc;
    }
    if (negated) valence *= detail::kNegationScalar;

    sum += valence;
  }

  int exclaims = 0;
  for (char c : raw_text) {
    if (c == '!') ++exclaims;
  }
  const double emphasis =
      detail::kExclaimIncrement * std::min(exclaims, detail::kExclaimCap);
  if (sum > 0) {
    sum += emphasis;
  } else if (sum < 0) {
    sum -= emphasis;
  }

  const double normalized = sum / std::sqrt(sum * sum + alpha);
  return std::clamp(normalized, -1.0, 1.0);
}

}  // namespace csei
