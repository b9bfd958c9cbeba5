#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "csei/csv.hpp"
#include "csei/errors.hpp"
#include "csei/lexicon.hpp"
#include "csei/posts.hpp"
#include "csei/readability.hpp"
#include "csei/sentiment.hpp"

namespace csei {

struct ExternalScores {
  std::array<double, kEmotionCount> emotions{};  // order: kEmotionNames
  double offensive = 0.0;
};

inline const std::vector<std::string>& external_scores_header() {
  static const std::vector<std::string> header = {
      "id",    "fear",     "surprise", "joy",      "sadness",
      "anger", "disgust",  "neutral",  "offensive"};
  return header;
}

inline std::unordered_map<std::string, ExternalScores> load_external_scores(
    std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) {
    throw Error(ErrorKind::schema, "external-scores file is empty");
  }
  if (fields != external_scores_header()) {
    throw Error(ErrorKind::schema,
                "external-scores header must be "
                "id,fear,surprise,joy,sadness,anger,disgust,neutral,offensive");
  }
  std::unordered_map<std::string, ExternalScores> table;
  std::uint64_t row = 1;
  while (read_csv_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 9) {
      throw Error(ErrorKind::schema, "external-scores row " +
                                         std::to_string(row) +
                                         ": wrong field count");
    }
    if (fields[0].empty()) {
      throw Error(ErrorKind::schema,
                  "external-scores row " + std::to_string(row) + ": empty id");
    }
    ExternalScores s;
    bool ok = true;
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      ok = ok && parse_double(fields[1 + i], s.emotions[i]);
    }
    ok = ok && parse_double(fields[8], s.offensive);
    if (!ok) {
      throw Error(ErrorKind::schema, "external-scores row " +
                                         std::to_string(row) +
                                         ": unparseable value");
    }
    if (!table.emplace(fields[0], s).second) {
      throw Error(ErrorKind::schema, "external-scores row " +
                                         std::to_string(row) +
                                         ": duplicate id " + fields[0]);
    }
  }
  return table;
}

struct AttachResult {
  std::vector<ScoredPost> posts;
  std::uint64_t defaulted = 0;     // ids absent from the table
  std::uint64_t renormalized = 0;  // vectors off unit sum by more than 1e-6
};

// Joins external emotion/offensiveness scores onto posts and fills compound
// sentiment and readability from the built-in scorers. Posts missing from
// the table get the neutral default and a flag rather than being dropped,
// so daily post counts stay intact.
inline AttachResult attach_external_scores(
    const std::vector<CleanPost>& posts,
    const std::unordered_map<std::string, ExternalScores>& table,
    const Lexicon& lexicon, double alpha = 15.0) {
  constexpr std::size_t kNeutralIndex = 6;  // kEmotionNames order
  AttachResult out;
  out.posts.reserve(posts.size());
  for (const CleanPost& clean : posts) {
    ScoredPost post;
    static_cast<CleanPost&>(post) = clean;

    const auto hit = table.find(clean.id);
    if (hit == table.end()) {
      post.emotions.fill(0.0);
      post.emotions[kNeutralIndex] = 1.0;
      post.offensive = 0.0;
      post.external_defaulted = true;
      ++out.defaulted;
    } else {
      const ExternalScores& s = hit->second;
      double sum = 0.0;
      for (std::size_t i = 0; i < kEmotionCount; ++i) {
        if (s.emotions[i] < 0.0) {
          throw Error(ErrorKind::data, "negative emotion probability for id " +
                                           clean.id);
        }
        sum += s.emotions[i];
      }
      if (sum == 0.0) {
        throw Error(ErrorKind::data,
                    "all-zero emotion vector for id " + clean.id);
      }
      if (s.offensive < 0.0 || s.offensive > 1.0) {
        throw Error(ErrorKind::data,
                    "offensive score outside [0,1] for id " + clean.id);
      }
      post.emotions = s.emotions;
      if (std::abs(sum - 1.0) > 1e-6) {
        for (double& e : post.emotions) e /= sum;
        post.external_renormalized = true;
        ++out.renormalized;
      }
      post.offensive = s.offensive;
    }

    const std::string raw_text = clean.title + " " + clean.selftext;
    post.compound = compound_sentiment(raw_text, lexicon, alpha);
    const ReadabilityScore r = flesch_reading_ease(raw_text);
    post.readability = r.score;
    post.readability_degenerate = r.degenerate;

    out.posts.push_back(std::move(post));
  }
  return out;
}

}  // namespace csei
