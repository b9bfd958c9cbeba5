#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "csei/csv.hpp"
#include "csei/errors.hpp"
#include "csei/text.hpp"

namespace csei {

struct Lexicon {
  std::unordered_map<std::string, double> entries;   // token -> valence
  std::unordered_map<std::string, double> boosters;  // token -> increment
  std::unordered_set<std::string> negators;
};

namespace detail {

inline void check_token(std::string_view token, std::uint64_t line,
                        const char* what) {
  if (token.empty()) {
    throw Error(ErrorKind::schema, std::string(what) + " line " +
                                       std::to_string(line) + ": empty token");
  }
  for (char c : token) {
    if (c >= 'A' && c <= 'Z') {
      throw Error(ErrorKind::schema,
                  std::string(what) + " line " + std::to_string(line) +
                      ": token not lowercase: " + std::string(token));
    }
  }
}

inline bool skip_line(std::string_view line) {
  const std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

// token<TAB>value lines; blank lines and #-comments allowed.
inline void load_scored_tokens(std::istream& in, const char* what,
                               std::unordered_map<std::string, double>& out) {
  std::string line;
  std::uint64_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_line(line)) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::schema, std::string(what) + " line " +
                                         std::to_string(n) + ": expected " +
                                         "token<TAB>value");
    }
    std::string token(trim(std::string_view(line).substr(0, tab)));
    check_token(token, n, what);
    double value = 0.0;
    if (!parse_double(trim(std::string_view(line).substr(tab + 1)), value)) {
      throw Error(ErrorKind::schema, std::string(what) + " line " +
                                         std::to_string(n) +
                                         ": unparseable value");
    }
    if (!out.emplace(std::move(token), value).second) {
      throw Error(ErrorKind::schema, std::string(what) + " line " +
                                         std::to_string(n) +
                                         ": duplicate token");
    }
  }
}

}  // namespace detail

inline std::unordered_map<std::string, double> load_valence_lexicon(
    std::istream& in) {
  std::unordered_map<std::string, double> out;
  detail::load_scored_tokens(in, "lexicon", out);
  return out;
}

inline std::unordered_map<std::string, double> load_boosters(std::istream& in) {
  std::unordered_map<std::string, double> out;
  detail::load_scored_tokens(in, "boosters", out);
  return out;
}

// One token per line: negator and stopword lists share this shape.
inline std::unordered_set<std::string> load_token_set(std::istream& in,
                                                      const char* what) {
  std::unordered_set<std::string> out;
  std::string line;
  std::uint64_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::skip_line(line)) continue;
    std::string token(trim(line));
    detail::check_token(token, n, what);
    if (!out.insert(std::move(token)).second) {
      throw Error(ErrorKind::schema, std::string(what) + " line " +
                                         std::to_string(n) +
                                         ": duplicate token");
    }
  }
  return out;
}

}  // namespace csei
