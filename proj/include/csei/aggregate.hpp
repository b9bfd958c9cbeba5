#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "csei/csv.hpp"
#include "csei/date.hpp"
#include "csei/errors.hpp"
#include "csei/matrix.hpp"
#include "csei/posts.hpp"
#include "csei/text.hpp"

namespace csei {

// Canonical feature order; every 13-wide artifact uses exactly this.
inline constexpr std::array<const char*, 13> kFeatureNames = {
    "compound_sentiment", "daily_total_score", "daily_post_count",
    "readability",        "offensive",         "domain_diversity",
    "anger",              "disgust",           "fear",
    "joy",                "neutral",           "sadness",
    "surprise"};
inline constexpr std::size_t kFeatureCount = kFeatureNames.size();

// kEmotionNames index for each emotion feature column (columns 6..12).
inline constexpr std::array<std::size_t, 7> kEmotionColumnSource = {
    4,  // anger
    5,  // disgust
    0,  // fear
    2,  // joy
    6,  // neutral
    3,  // sadness
    1,  // surprise
};

// Component groups used for reporting index contributions.
inline constexpr std::array<std::size_t, 8> kSentimentGroup = {0, 6, 7, 8,
                                                               9, 10, 11, 12};
inline constexpr std::array<std::size_t, 3> kEngagementGroup = {1, 2, 5};
inline constexpr std::array<std::size_t, 2> kQualityGroup = {3, 4};

enum class EmotionAgg { mean_prob, label_share };
enum class DiversityMode { distinct, shannon_entropy };

inline std::optional<EmotionAgg> parse_emotion_agg(std::string_view s) {
  if (s == "mean_prob") return EmotionAgg::mean_prob;
  if (s == "label_share") return EmotionAgg::label_share;
  return std::nullopt;
}

inline std::optional<DiversityMode> parse_diversity_mode(std::string_view s) {
  if (s == "distinct") return DiversityMode::distinct;
  if (s == "shannon_entropy") return DiversityMode::shannon_entropy;
  return std::nullopt;
}

struct FeatureMatrix {
  std::vector<Date> dates;  // strictly increasing
  Matrix values;            // dates.size() x kFeatureCount
};

// Distinct non-empty domains after lowercasing and trimming.
inline std::int64_t domain_diversity(const std::vector<std::string>& domains) {
  std::vector<std::string> keys;
  keys.reserve(domains.size());
  for (const std::string& d : domains) {
    std::string key = to_lower(trim(d));
    if (!key.empty()) keys.push_back(std::move(key));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return static_cast<std::int64_t>(keys.size());
}

// Shannon entropy (nats) of the domain distribution; the switch-selectable
// alternative breadth measure.
inline double domain_entropy(const std::vector<std::string>& domains) {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  for (const std::string& d : domains) {
    std::string key = to_lower(trim(d));
    if (key.empty()) continue;
    ++counts[key];
    ++total;
  }
  if (total == 0) return 0.0;
  double h = 0.0;
  for (const auto& [key, n] : counts) {
    const double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

// Groups scored posts by UTC day; one matrix row per day with posts, in date
// order. Emotion columns are per-post probability means by default, or the
// share of posts whose top-probability label is that emotion.
inline FeatureMatrix build_daily_features(
    const std::vector<ScoredPost>& posts,
    EmotionAgg emotion_agg = EmotionAgg::mean_prob,
    DiversityMode diversity = DiversityMode::distinct) {
  struct DayAccum {
    std::int64_t count = 0;
    std::int64_t total_score = 0;
    double compound = 0.0;
    double readability = 0.0;
    double offensive = 0.0;
    std::array<double, kEmotionCount> emotion_sum{};
    std::array<std::int64_t, kEmotionCount> label_count{};
    std::vector<std::string> domains;
  };

  std::map<Date, DayAccum> days;
  for (const ScoredPost& p : posts) {
    DayAccum& day = days[p.post_date];
    ++day.count;
    day.total_score += p.score;
    day.compound += p.compound;
    day.readability += p.readability;
    day.offensive += p.offensive;
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      day.emotion_sum[e] += p.emotions[e];
    }
    std::size_t top = 0;
    for (std::size_t e = 1; e < kEmotionCount; ++e) {
      if (p.emotions[e] > p.emotions[top]) top = e;
    }
    ++day.label_count[top];
    day.domains.push_back(p.domain);
  }

  FeatureMatrix fm;
  fm.dates.reserve(days.size());
  fm.values = Matrix(days.size(), kFeatureCount);
  std::size_t r = 0;
  for (const auto& [date, day] : days) {
    fm.dates.push_back(date);
    const double n = static_cast<double>(day.count);
    fm.values.at(r, 0) = day.compound / n;
    fm.values.at(r, 1) = static_cast<double>(day.total_score);
    fm.values.at(r, 2) = n;
    fm.values.at(r, 3) = day.readability / n;
    fm.values.at(r, 4) = day.offensive / n;
    fm.values.at(r, 5) = diversity == DiversityMode::distinct
                             ? static_cast<double>(domain_diversity(day.domains))
                             : domain_entropy(day.domains);
    for (std::size_t e = 0; e < 7; ++e) {
      const std::size_t src = kEmotionColumnSource[e];
      fm.values.at(r, 6 + e) =
          emotion_agg == EmotionAgg::mean_prob
              ? day.emotion_sum[src] / n
              : static_cast<double>(day.label_count[src]) / n;
    }
    ++r;
  }
  return fm;
}

inline const std::vector<std::string>& feature_matrix_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h = {"date"};
    for (const char* name : kFeatureNames) h.emplace_back(name);
    return h;
  }();
  return header;
}

inline void write_feature_matrix(std::ostream& os, const FeatureMatrix& fm) {
  write_csv_row(os, feature_matrix_header());
  std::vector<std::string> row(1 + kFeatureCount);
  for (std::size_t r = 0; r < fm.dates.size(); ++r) {
    row[0] = fm.dates[r].to_string();
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      row[1 + c] = format_double(fm.values.at(r, c));
    }
    write_csv_row(os, row);
  }
}

inline FeatureMatrix read_feature_matrix(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) {
    throw Error(ErrorKind::schema, "feature matrix file is empty");
  }
  if (fields != feature_matrix_header()) {
    throw Error(ErrorKind::schema, "feature matrix header mismatch");
  }
  std::vector<Date> dates;
  std::vector<double> cells;
  std::uint64_t row = 1;
  while (read_csv_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 1 + kFeatureCount) {
      throw Error(ErrorKind::schema, "feature matrix row " +
                                         std::to_string(row) +
                                         ": wrong field count");
    }
    const std::optional<Date> d = Date::parse(fields[0]);
    if (!d) {
      throw Error(ErrorKind::schema, "feature matrix row " +
                                         std::to_string(row) +
                                         ": unparseable date " + fields[0]);
    }
    if (!dates.empty() && !(dates.back() < *d)) {
      throw Error(ErrorKind::data,
                  "feature matrix dates not strictly increasing at row " +
                      std::to_string(row));
    }
    dates.push_back(*d);
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      double v = 0.0;
      if (!parse_double(fields[1 + c], v)) {
        throw Error(ErrorKind::schema, "feature matrix row " +
                                           std::to_string(row) +
                                           ": unparseable value");
      }
      cells.push_back(v);
    }
  }
  FeatureMatrix fm;
  fm.dates = std::move(dates);
  fm.values = Matrix(fm.dates.size(), kFeatureCount);
  fm.values.values = std::move(cells);
  return fm;
}

}  // namespace csei
