#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace csei {

inline bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

inline char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower_ascii(c);
  return out;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) tokens.emplace_back(s.substr(start, i - start));
  }
  return tokens;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  if (haystack.size() < needle.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    std::size_t j = 0;
    while (j < needle.size() &&
           to_lower_ascii(haystack[i + j]) == to_lower_ascii(needle[j])) {
      ++j;
    }
    if (j == needle.size()) return true;
  }
  return false;
}

namespace detail {

// scheme://... (alphabetic scheme) or www.<something>
inline bool is_url_token(std::string_view tok) {
  if (tok.size() > 4) {
    std::string_view head = tok.substr(0, 4);
    if ((to_lower_ascii(head[0]) == 'w') && (to_lower_ascii(head[1]) == 'w') &&
        (to_lower_ascii(head[2]) == 'w') && head[3] == '.') {
      return true;
    }
  }
  const std::size_t pos = tok.find("://");
  if (pos == std::string_view::npos || pos == 0) return false;
  if (!is_ascii_alpha(tok[0])) return false;
  for (std::size_t i = 1; i < pos; ++i) {
    const char c = tok[i];
    if (!is_ascii_alpha(c) && !is_ascii_digit(c) && c != '+' && c != '-' &&
        c != '.') {
      return false;
    }
  }
  return true;
}

inline bool is_hashtag_token(std::string_view tok) {
  return tok.size() > 1 && tok[0] == '#';
}

inline bool is_mention_token(std::string_view tok) {
  return tok.size() > 1 && tok[0] == '@';
}

}  // namespace detail

// Normalizes free text to lowercase alphabetic tokens joined by single
// spaces. Rules apply in a fixed order: URL tokens, hashtags and mentions
// are dropped whole; then digits are removed, remaining non-alphabetic
// characters become spaces, everything is lowercased, and stopwords are
// filtered out. Idempotent: cleaning cleaned text is the identity.
inline std::string clean_text(std::string_view text,
                              const std::unordered_set<std::string>& stopwords) {
  std::string survivors;
  survivors.reserve(text.size());
  for (const std::string& tok : split_whitespace(text)) {
    if (detail::is_url_token(tok) || detail::is_hashtag_token(tok) ||
        detail::is_mention_token(tok)) {
      continue;
    }
    if (!survivors.empty()) survivors.push_back(' ');
    survivors += tok;
  }

  std::string chars;
  chars.reserve(survivors.size());
  for (char c : survivors) {
    if (is_ascii_digit(c)) continue;
    chars.push_back(is_ascii_alpha(c) ? to_lower_ascii(c) : ' ');
  }

  std::string out;
  out.reserve(chars.size());
  for (const std::string& tok : split_whitespace(chars)) {
    if (stopwords.contains(tok)) continue;
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

// Lexicon-coverage heuristic over cleaned text. An empty token list is
// never considered English.
inline bool is_english(std::string_view cleaned_text,
                       const std::unordered_set<std::string>& lexicon,
                       double threshold) {
  const std::vector<std::string> tokens = split_whitespace(cleaned_text);
  if (tokens.empty()) return false;
  std::size_t hits = 0;
  for (const std::string& tok : tokens) {
    if (lexicon.contains(tok)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(tokens.size()) >=
         threshold;
}

}  // namespace csei
