#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "csei/aggregate.hpp"
#include "csei/date.hpp"
#include "csei/errors.hpp"
#include "csei/ingest.hpp"

namespace csei {

enum class WeightMode { derive, load };
enum class OutlierLevel { daily, post };
enum class EventCorrelate { delta, abs_delta, smoothed };

#ifndef CSEI_DATA_DIR
#define CSEI_DATA_DIR "data"
#endif

inline std::string default_data_dir() { return CSEI_DATA_DIR; }

struct RunConfig {
  // inputs
  std::string posts;
  PostFormat format = PostFormat::csv;
  std::string external_scores;  // optional; empty means neutral defaults
  std::string lexicon = default_data_dir() + "/sentiment_lexicon.tsv";
  std::string boosters = default_data_dir() + "/boosters.tsv";
  std::string negators = default_data_dir() + "/negators.txt";
  std::string stopwords = default_data_dir() + "/stopwords.txt";
  std::string events = default_data_dir() + "/covid_events.csv";
  std::string weights_file = default_data_dir() + "/weights_reference.csv";

  // ingest window and filters
  Date min_date = *Date::parse("2020-02-11");
  Date max_date = *Date::parse("2021-10-25");
  double english_threshold = 0.3;

  // aggregation
  EmotionAgg emotion_agg = EmotionAgg::mean_prob;
  DiversityMode diversity = DiversityMode::distinct;

  // outlier stage
  OutlierLevel outlier_level = OutlierLevel::daily;
  std::uint64_t n_trees = 100;
  std::uint64_t subsample_size = 0;  // 0: min(256, rows)
  std::uint64_t seed = 42;
  double contamination = 0.005;
  double pc1_max = 25.0;
  double pc2_min = 7.5;

  // index
  std::string normalization = "minmax";
  WeightMode weight_mode = WeightMode::derive;

  // analysis
  std::uint64_t window = 7;
  std::uint64_t distance = 7;
  std::optional<double> prominence;  // empty: 0.5 x std of smoothed series
  EventCorrelate event_correlate = EventCorrelate::delta;

  // output
  std::string output_dir = "out";
  bool plots = false;
  bool log_timestamps = false;
};

struct ConfigKeyDoc {
  const char* key;
  const char* help;
};

inline constexpr ConfigKeyDoc kConfigKeys[] = {
    {"posts", "path to the posts file (csv or jsonl)"},
    {"format", "posts file format: csv | jsonl"},
    {"external_scores", "path to the emotion/offensive score table (optional)"},
    {"lexicon", "path to the valence lexicon (token<TAB>valence)"},
    {"boosters", "path to the booster table (token<TAB>increment)"},
    {"negators", "path to the negator list (one token per line)"},
    {"stopwords", "path to the stopword list (one token per line)"},
    {"events", "path to the event calendar csv (date,label)"},
    {"weights_file", "path to a weight vector csv (feature,weight,loading)"},
    {"min_date", "earliest retained post date (YYYY-MM-DD)"},
    {"max_date", "latest retained post date (YYYY-MM-DD)"},
    {"english_threshold", "lexicon-coverage fraction for the English filter"},
    {"emotion_agg", "daily emotion aggregation: mean_prob | label_share"},
    {"diversity", "domain diversity measure: distinct | shannon_entropy"},
    {"outlier_level", "outlier granularity: daily | post"},
    {"n_trees", "isolation forest tree count"},
    {"subsample_size", "isolation forest subsample size (0 = min(256, rows))"},
    {"seed", "master seed for all stochastic stages"},
    {"contamination", "fraction of rows flagged by the forest, in [0,1)"},
    {"pc1_max", "flag rows with PC1 score below this"},
    {"pc2_min", "... and PC2 score at or above this"},
    {"normalization", "feature scaling policy (minmax)"},
    {"weight_mode", "index weights: derive | load"},
    {"window", "smoothing window width (days)"},
    {"distance", "extrema minimum distance d (samples)"},
    {"prominence", "extrema prominence threshold p, or 'auto'"},
    {"event_correlate", "series correlated with events: delta | abs_delta | smoothed"},
    {"output_dir", "directory for stage artifacts"},
    {"plots", "emit svg charts from the analyze stage"},
    {"log_timestamps", "record wall-clock timestamps in run metadata"},
};

namespace detail {

inline Error config_error(const std::string& key, const std::string& why) {
  return Error(ErrorKind::config, "config key '" + key + "': " + why);
}

inline double config_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!parse_double(value, out)) throw config_error(key, "expected a number");
  return out;
}

inline std::uint64_t config_uint(const std::string& key,
                                 const std::string& value) {
  std::int64_t out = 0;
  if (!parse_int64(value, out) || out < 0) {
    throw config_error(key, "expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(out);
}

inline bool config_bool(const std::string& key, const std::string& value) {
  bool out = false;
  if (!parse_bool_field(value, out)) {
    throw config_error(key, "expected true or false");
  }
  return out;
}

inline Date config_date(const std::string& key, const std::string& value) {
  const std::optional<Date> d = Date::parse(value);
  if (!d) throw config_error(key, "expected YYYY-MM-DD");
  return *d;
}

}  // namespace detail

// key = value lines; '#' comments; duplicate keys rejected.
inline std::map<std::string, std::string> parse_config_file(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  std::uint64_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::config, "config line " + std::to_string(n) +
                                         ": expected key = value");
    }
    std::string key(trim(stripped.substr(0, eq)));
    std::string value(trim(stripped.substr(eq + 1)));
    if (key.empty()) {
      throw Error(ErrorKind::config,
                  "config line " + std::to_string(n) + ": empty key");
    }
    if (!entries.emplace(std::move(key), std::move(value)).second) {
      throw Error(ErrorKind::config, "config line " + std::to_string(n) +
                                         ": duplicate key");
    }
  }
  return entries;
}

inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
  using detail::config_bool;
  using detail::config_date;
  using detail::config_double;
  using detail::config_error;
  using detail::config_uint;

  if (key == "posts") {
    cfg.posts = value;
  } else if (key == "format") {
    const std::optional<PostFormat> f = parse_post_format(value);
    if (!f) throw config_error(key, "expected csv or jsonl");
    cfg.format = *f;
  } else if (key == "external_scores") {
    cfg.external_scores = value;
  } else if (key == "lexicon") {
    cfg.lexicon = value;
  } else if (key == "boosters") {
    cfg.boosters = value;
  } else if (key == "negators") {
    cfg.negators = value;
  } else if (key == "stopwords") {
    cfg.stopwords = value;
  } else if (key == "events") {
    cfg.events = value;
  } else if (key == "weights_file") {
    cfg.weights_file = value;
  } else if (key == "min_date") {
    cfg.min_date = config_date(key, value);
  } else if (key == "max_date") {
    cfg.max_date = config_date(key, value);
  } else if (key == "english_threshold") {
    cfg.english_threshold = config_double(key, value);
  } else if (key == "emotion_agg") {
    const std::optional<EmotionAgg> e = parse_emotion_agg(value);
    if (!e) throw config_error(key, "expected mean_prob or label_share");
    cfg.emotion_agg = *e;
  } else if (key == "diversity") {
    const std::optional<DiversityMode> d = parse_diversity_mode(value);
    if (!d) throw config_error(key, "expected distinct or shannon_entropy");
    cfg.diversity = *d;
  } else if (key == "outlier_level") {
    if (value == "daily") {
      cfg.outlier_level = OutlierLevel::daily;
    } else if (value == "post") {
      cfg.outlier_level = OutlierLevel::post;
    } else {
      throw config_error(key, "expected daily or post");
    }
  } else if (key == "n_trees") {
    cfg.n_trees = config_uint(key, value);
  } else if (key == "subsample_size") {
    cfg.subsample_size = config_uint(key, value);
  } else if (key == "seed") {
    cfg.seed = config_uint(key, value);
  } else if (key == "contamination") {
    cfg.contamination = config_double(key, value);
  } else if (key == "pc1_max") {
    cfg.pc1_max = config_double(key, value);
  } else if (key == "pc2_min") {
    cfg.pc2_min = config_double(key, value);
  } else if (key == "normalization") {
    cfg.normalization = value;
  } else if (key == "weight_mode") {
    if (value == "derive") {
      cfg.weight_mode = WeightMode::derive;
    } else if (value == "load") {
      cfg.weight_mode = WeightMode::load;
    } else {
      throw config_error(key, "expected derive or load");
    }
  } else if (key == "window") {
    cfg.window = config_uint(key, value);
  } else if (key == "distance") {
    cfg.distance = config_uint(key, value);
  } else if (key == "prominence") {
    if (value == "auto") {
      cfg.prominence.reset();
    } else {
      cfg.prominence = config_double(key, value);
    }
  } else if (key == "event_correlate") {
    if (value == "delta") {
      cfg.event_correlate = EventCorrelate::delta;
    } else if (value == "abs_delta") {
      cfg.event_correlate = EventCorrelate::abs_delta;
    } else if (value == "smoothed") {
      cfg.event_correlate = EventCorrelate::smoothed;
    } else {
      throw config_error(key, "expected delta, abs_delta or smoothed");
    }
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "plots") {
    cfg.plots = config_bool(key, value);
  } else if (key == "log_timestamps") {
    cfg.log_timestamps = config_bool(key, value);
  } else {
    throw Error(ErrorKind::config, "unknown config key '" + key + "'");
  }
}

inline RunConfig config_from_map(
    const std::map<std::string, std::string>& entries) {
  RunConfig cfg;
  for (const auto& [key, value] : entries) {
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

// Range checks shared by every subcommand; rejects before any stage runs.
inline void validate_config(const RunConfig& cfg) {
  using detail::config_error;
  if (cfg.max_date < cfg.min_date) {
    throw config_error("max_date", "window is empty: max_date < min_date");
  }
  if (cfg.english_threshold < 0.0 || cfg.english_threshold > 1.0) {
    throw config_error("english_threshold", "must lie in [0, 1]");
  }
  if (cfg.n_trees < 1) throw config_error("n_trees", "must be >= 1");
  if (cfg.subsample_size == 1) {
    throw config_error("subsample_size", "must be 0 (auto) or >= 2");
  }
  if (cfg.contamination < 0.0 || cfg.contamination >= 1.0) {
    throw config_error("contamination", "must lie in [0, 1)");
  }
  if (cfg.normalization != "minmax") {
    throw config_error("normalization", "only minmax is supported");
  }
  if (cfg.window < 1) throw config_error("window", "must be >= 1");
  if (cfg.distance < 1) throw config_error("distance", "must be >= 1");
  if (cfg.prominence && *cfg.prominence < 0.0) {
    throw config_error("prominence", "must be >= 0 or 'auto'");
  }
  if (cfg.output_dir.empty()) {
    throw config_error("output_dir", "must not be empty");
  }
}

}  // namespace csei
