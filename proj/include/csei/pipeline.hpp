#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csei/aggregate.hpp"
#include "csei/analysis.hpp"
#include "csei/config.hpp"
#include "csei/csv.hpp"
#include "csei/errors.hpp"
#include "csei/index.hpp"
#include "csei/ingest.hpp"
#include "csei/lexicon.hpp"
#include "csei/outliers.hpp"
#include "csei/scoring.hpp"
#include "csei/stats.hpp"
#include "csei/svg.hpp"
#include "csei/version.hpp"

namespace csei {

using ordered_json = nlohmann::ordered_json;

// One writer per output directory. fopen "wx" is atomic-create; a leftover
// lock from a crashed run must be deleted by hand.
class OutputLock {
 public:
  explicit OutputLock(const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    path_ = output_dir + "/.lock";
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr) {
      throw Error(ErrorKind::io,
                  "output directory is locked by another run (remove " +
                      path_ + " if that run is dead)");
    }
    std::fclose(f);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;
  ~OutputLock() { std::remove(path_.c_str()); }

 private:
  std::string path_;
};

namespace detail {

inline ordered_json config_snapshot(const RunConfig& cfg) {
  ordered_json snap;
  snap["posts"] = cfg.posts;
  snap["format"] = cfg.format == PostFormat::csv ? "csv" : "jsonl";
  snap["external_scores"] = cfg.external_scores;
  snap["lexicon"] = cfg.lexicon;
  snap["boosters"] = cfg.boosters;
  snap["negators"] = cfg.negators;
  snap["stopwords"] = cfg.stopwords;
  snap["events"] = cfg.events;
  snap["weights_file"] = cfg.weights_file;
  snap["min_date"] = cfg.min_date.to_string();
  snap["max_date"] = cfg.max_date.to_string();
  snap["english_threshold"] = cfg.english_threshold;
  snap["emotion_agg"] =
      cfg.emotion_agg == EmotionAgg::mean_prob ? "mean_prob" : "label_share";
  snap["diversity"] = cfg.diversity == DiversityMode::distinct
                          ? "distinct"
                          : "shannon_entropy";
  snap["outlier_level"] =
      cfg.outlier_level == OutlierLevel::daily ? "daily" : "post";
  snap["n_trees"] = cfg.n_trees;
  snap["subsample_size"] = cfg.subsample_size;
  snap["seed"] = cfg.seed;
  snap["contamination"] = cfg.contamination;
  snap["pc1_max"] = cfg.pc1_max;
  snap["pc2_min"] = cfg.pc2_min;
  snap["normalization"] = cfg.normalization;
  snap["weight_mode"] =
      cfg.weight_mode == WeightMode::derive ? "derive" : "load";
  snap["window"] = cfg.window;
  snap["distance"] = cfg.distance;
  snap["prominence"] =
      cfg.prominence ? ordered_json(*cfg.prominence) : ordered_json("auto");
  switch (cfg.event_correlate) {
    case EventCorrelate::delta:
      snap["event_correlate"] = "delta";
      break;
    case EventCorrelate::abs_delta:
      snap["event_correlate"] = "abs_delta";
      break;
    case EventCorrelate::smoothed:
      snap["event_correlate"] = "smoothed";
      break;
  }
  snap["output_dir"] = cfg.output_dir;
  snap["plots"] = cfg.plots;
  snap["log_timestamps"] = cfg.log_timestamps;
  return snap;
}

inline ordered_json load_metadata(const std::string& output_dir) {
  const std::string path = output_dir + "/run_metadata.json";
  std::ifstream in(path);
  if (in) {
    ordered_json meta = ordered_json::parse(in, nullptr, false);
    if (!meta.is_discarded() && meta.is_object()) return meta;
  }
  return ordered_json::object();
}

inline void stamp_stage(ordered_json& meta, const RunConfig& cfg,
                        const char* stage) {
  meta["tool_version"] = kVersion;
  meta["config"] = config_snapshot(cfg);
  if (!meta.contains("assumptions")) {
    ordered_json a;
    a["text_fields"] = "filters and scorers read the concatenation of title "
                       "and selftext";
    a["covariance_denominator"] = "n-1";
    a["deleted_markers"] = "selftext only, exact after trim";
    a["emotion_defaults"] = "posts without an external score row are neutral";
    meta["assumptions"] = a;
  }
  if (cfg.log_timestamps) {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    meta["timestamps"][stage] = buf;
  }
}

inline void save_metadata(const std::string& output_dir,
                          const ordered_json& meta) {
  std::ofstream os = open_output(output_dir + "/run_metadata.json");
  os << meta.dump(2) << '\n';
}

inline Lexicon load_lexicon_files(const RunConfig& cfg) {
  Lexicon lex;
  {
    std::ifstream in = open_input(cfg.lexicon);
    lex.entries = load_valence_lexicon(in);
  }
  {
    std::ifstream in = open_input(cfg.boosters);
    lex.boosters = load_boosters(in);
  }
  {
    std::ifstream in = open_input(cfg.negators);
    lex.negators = load_token_set(in, "negators");
  }
  return lex;
}

inline std::string stage_path(const RunConfig& cfg, const char* name) {
  return cfg.output_dir + "/" + name;
}

// Stages write artifacts unconditionally, so each one makes sure the
// directory exists instead of assuming a lock holder already did.
inline void ensure_output_dir(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) {
    throw Error(ErrorKind::config, "output_dir is empty");
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw Error(ErrorKind::io, "cannot create output directory " +
                                   cfg.output_dir + ": " + ec.message());
  }
}

}  // namespace detail

struct IngestOutputs {
  FilterCounts counts;
  std::uint64_t malformed = 0;
};

// posts file -> clean_posts.csv + metadata section.
inline IngestOutputs run_ingest(const RunConfig& cfg) {
  try {
    detail::ensure_output_dir(cfg);
    if (cfg.posts.empty()) {
      throw Error(ErrorKind::config, "no posts file configured");
    }
    std::unordered_set<std::string> stopwords;
    {
      std::ifstream in = open_input(cfg.stopwords);
      stopwords = load_token_set(in, "stopwords");
    }
    std::unordered_set<std::string> english;
    {
      std::ifstream in = open_input(cfg.lexicon);
      for (const auto& [token, valence] : load_valence_lexicon(in)) {
        english.insert(token);
      }
      for (const std::string& s : stopwords) english.insert(s);
    }

    std::ifstream in = open_input(cfg.posts);
    const ParseResult parsed = parse_posts(in, cfg.format);
    const FilterResult filtered =
        filter_posts(parsed.posts, stopwords, english, cfg.english_threshold,
                     cfg.min_date, cfg.max_date);

    {
      std::ofstream os = open_output(detail::stage_path(cfg, "clean_posts.csv"));
      write_clean_posts(os, filtered.survivors);
    }

    ordered_json meta = detail::load_metadata(cfg.output_dir);
    detail::stamp_stage(meta, cfg, "ingest");
    ordered_json stage;
    stage["parsed"] = filtered.counts.ingested;
    stage["malformed"] = parsed.malformed;
    stage["malformed_notes"] = parsed.malformed_notes;
    stage["deleted"] = filtered.counts.deleted;
    stage["removed"] = filtered.counts.removed;
    stage["bot"] = filtered.counts.bot;
    stage["non_english"] = filtered.counts.non_english;
    stage["out_of_window"] = filtered.counts.out_of_window;
    stage["survivors"] = filtered.counts.survivors;
    meta["stages"]["ingest"] = stage;
    detail::save_metadata(cfg.output_dir, meta);

    return {filtered.counts, parsed.malformed};
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("ingest", e);
  }
}

struct BuildOutputs {
  FeatureMatrix features;  // retained rows only
  WeightVector weights;
  IndexSeries index;
  OutlierReport outliers;
};

namespace detail {

// Post-level variant of the observation matrix: the per-post analog of the
// daily features (counts and diversity have no per-post meaning).
inline Matrix post_observation_matrix(const std::vector<ScoredPost>& posts) {
  Matrix m(posts.size(), 11);
  for (std::size_t r = 0; r < posts.size(); ++r) {
    const ScoredPost& p = posts[r];
    m.at(r, 0) = p.compound;
    m.at(r, 1) = static_cast<double>(p.score);
    m.at(r, 2) = p.readability;
    m.at(r, 3) = p.offensive;
    for (std::size_t e = 0; e < 7; ++e) {
      m.at(r, 4 + e) = p.emotions[kEmotionColumnSource[e]];
    }
  }
  return m;
}

inline FeatureMatrix drop_rows(const FeatureMatrix& fm,
                               const std::vector<std::size_t>& removed) {
  std::vector<bool> drop(fm.dates.size(), false);
  for (std::size_t i : removed) drop[i] = true;
  FeatureMatrix out;
  out.values = Matrix(0, fm.values.cols);
  for (std::size_t r = 0; r < fm.dates.size(); ++r) {
    if (drop[r]) continue;
    out.dates.push_back(fm.dates[r]);
    for (std::size_t c = 0; c < fm.values.cols; ++c) {
      out.values.values.push_back(fm.values.at(r, c));
    }
    ++out.values.rows;
  }
  return out;
}

}  // namespace detail

// clean_posts.csv -> features.csv, outlier_report.csv, weights.csv,
// index.csv + metadata section.
inline BuildOutputs run_build(const RunConfig& cfg) {
  try {
    detail::ensure_output_dir(cfg);
    std::vector<CleanPost> posts;
    {
      std::ifstream in = open_input(detail::stage_path(cfg, "clean_posts.csv"));
      posts = read_clean_posts(in);
    }
    const Lexicon lexicon = detail::load_lexicon_files(cfg);
    std::unordered_map<std::string, ExternalScores> table;
    if (!cfg.external_scores.empty()) {
      std::ifstream in = open_input(cfg.external_scores);
      table = load_external_scores(in);
    }
    AttachResult scored = attach_external_scores(posts, table, lexicon);

    OutlierParams params;
    params.n_trees = static_cast<std::size_t>(cfg.n_trees);
    params.subsample_size = static_cast<std::size_t>(cfg.subsample_size);
    params.seed = cfg.seed;
    params.contamination = cfg.contamination;
    params.pc1_max = cfg.pc1_max;
    params.pc2_min = cfg.pc2_min;

    BuildOutputs out;
    if (cfg.outlier_level == OutlierLevel::daily) {
      const FeatureMatrix all_days =
          build_daily_features(scored.posts, cfg.emotion_agg, cfg.diversity);
      std::vector<std::string> labels;
      labels.reserve(all_days.dates.size());
      for (const Date& d : all_days.dates) labels.push_back(d.to_string());
      out.outliers = detect_outliers(all_days.values, labels, params);
      {
        std::ofstream os =
            open_output(detail::stage_path(cfg, "outlier_report.csv"));
        write_outlier_report(os, out.outliers, "date");
      }
      out.features = detail::drop_rows(all_days, out.outliers.removed_indices);
    } else {
      const Matrix observations = detail::post_observation_matrix(scored.posts);
      std::vector<std::string> labels;
      labels.reserve(scored.posts.size());
      for (const ScoredPost& p : scored.posts) labels.push_back(p.id);
      out.outliers = detect_outliers(observations, labels, params);
      {
        std::ofstream os =
            open_output(detail::stage_path(cfg, "outlier_report.csv"));
        write_outlier_report(os, out.outliers, "id");
      }
      std::vector<bool> drop(scored.posts.size(), false);
      for (std::size_t i : out.outliers.removed_indices) drop[i] = true;
      std::vector<ScoredPost> retained;
      retained.reserve(scored.posts.size());
      for (std::size_t i = 0; i < scored.posts.size(); ++i) {
        if (!drop[i]) retained.push_back(scored.posts[i]);
      }
      out.features =
          build_daily_features(retained, cfg.emotion_agg, cfg.diversity);
    }

    if (out.features.dates.empty()) {
      throw Error(ErrorKind::degenerate,
                  "no rows survive outlier removal; nothing to index");
    }
    {
      std::ofstream os = open_output(detail::stage_path(cfg, "features.csv"));
      write_feature_matrix(os, out.features);
    }

    const NormalizedMatrix normalized = minmax_normalize(out.features.values);
    bool loaded_off_simplex = false;
    if (cfg.weight_mode == WeightMode::derive) {
      out.weights = derive_weights(normalized.values);
    } else {
      std::ifstream in = open_input(cfg.weights_file);
      out.weights = read_weight_vector(in);
      loaded_off_simplex = std::abs(weight_sum(out.weights) - 1.0) > 1e-9;
    }
    {
      std::ofstream os = open_output(detail::stage_path(cfg, "weights.csv"));
      write_weight_vector(os, out.weights);
    }

    out.index = compute_index(out.features.dates, normalized.values, out.weights);
    {
      std::ofstream os = open_output(detail::stage_path(cfg, "index.csv"));
      write_index_series(os, out.index);
    }

    ordered_json meta = detail::load_metadata(cfg.output_dir);
    detail::stamp_stage(meta, cfg, "build");
    ordered_json stage;
    stage["posts"] = posts.size();
    stage["externally_scored"] =
        posts.size() - static_cast<std::size_t>(scored.defaulted);
    stage["score_defaulted"] = scored.defaulted;
    stage["score_renormalized"] = scored.renormalized;
    stage["observations"] = out.outliers.size();
    stage["forest_flagged"] = static_cast<std::uint64_t>(
        std::count(out.outliers.forest_flags.begin(),
                   out.outliers.forest_flags.end(), true));
    stage["pc_flagged"] = static_cast<std::uint64_t>(
        std::count(out.outliers.pc_flags.begin(), out.outliers.pc_flags.end(),
                   true));
    stage["removed"] = out.outliers.removed_indices.size();
    stage["pc_filter_degenerate"] = out.outliers.pc_degenerate;
    stage["days_indexed"] = out.features.dates.size();
    ordered_json norm_flags = ordered_json::array();
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      if (normalized.stats.constant[c]) norm_flags.push_back(kFeatureNames[c]);
    }
    stage["constant_columns"] = norm_flags;
    stage["explained_variance_ratio"] = out.weights.explained_variance_ratio;
    stage["weight_sum"] = weight_sum(out.weights);
    if (cfg.weight_mode == WeightMode::load) {
      stage["loaded_weights_off_simplex"] = loaded_off_simplex;
    }
    meta["stages"]["build"] = stage;
    detail::save_metadata(cfg.output_dir, meta);
    return out;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("build", e);
  }
}

struct AnalyzeOutputs {
  DeltaSeries deltas;
  std::vector<double> smoothed;
  std::vector<Date> smoothed_dates;
  Extrema peaks;
  Extrema valleys;
  double prominence_used = 0.0;
  std::vector<double> cumulative;
  std::optional<CorrelationResult> event_correlation;
  EventComparison comparison;
  std::size_t events_marked = 0;
  std::size_t events_uncovered = 0;
};

namespace detail {

inline double sample_std(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline void write_dated_series(const std::string& path, const char* value_name,
                               const std::vector<Date>& dates,
                               const std::vector<double>& values) {
  std::ofstream os = open_output(path);
  write_csv_row(os, {"date", value_name});
  for (std::size_t i = 0; i < dates.size(); ++i) {
    write_csv_row(os, {dates[i].to_string(), format_double(values[i])});
  }
}

inline void write_extrema_csv(const std::string& path, const Extrema& peaks,
                              const Extrema& valleys,
                              const std::vector<Date>& dates,
                              const std::vector<double>& values, std::size_t d,
                              double p) {
  std::ofstream os = open_output(path);
  write_csv_row(os, {"type", "index", "date", "value", "prominence", "d", "p"});
  const auto emit = [&](const char* type, const Extrema& e) {
    for (std::size_t i = 0; i < e.indices.size(); ++i) {
      const std::size_t t = e.indices[i];
      write_csv_row(os, {type, std::to_string(t), dates[t].to_string(),
                         format_double(values[t]),
                         format_double(e.prominences[i]), std::to_string(d),
                         format_double(p)});
    }
  };
  emit("peak", peaks);
  emit("valley", valleys);
}

inline void write_correlation_matrix_csv(const std::string& path,
                                         const std::vector<std::string>& names,
                                         const CorrelationMatrix& cm) {
  std::ofstream os = open_output(path);
  std::vector<std::string> row;
  row.push_back("feature");
  for (const std::string& n : names) row.push_back("r_" + n);
  for (const std::string& n : names) row.push_back("p_" + n);
  write_csv_row(os, row);
  for (std::size_t i = 0; i < names.size(); ++i) {
    row.clear();
    row.push_back(names[i]);
    for (std::size_t j = 0; j < names.size(); ++j) {
      row.push_back(cm.cell_defined(i, j) ? format_double(cm.r.at(i, j)) : "");
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
      row.push_back(cm.cell_defined(i, j) ? format_double(cm.p.at(i, j)) : "");
    }
    write_csv_row(os, row);
  }
}

inline const char* kFeaturePalette[13] = {
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c", "#98df8a",
    "#d62728", "#ff9896", "#9467bd", "#c5b0d5", "#8c564b", "#c49c94",
    "#e377c2"};

}  // namespace detail

// index.csv (+ features/weights when present) -> analysis report files.
inline AnalyzeOutputs run_analyze(const RunConfig& cfg) {
  try {
    detail::ensure_output_dir(cfg);
    IndexSeries index;
    {
      std::ifstream in = open_input(detail::stage_path(cfg, "index.csv"));
      index = read_index_series(in);
    }
    if (index.csei.size() < 2) {
      throw Error(ErrorKind::data,
                  "index series too short to analyze (need >= 2 rows)");
    }

    AnalyzeOutputs out;
    out.deltas = daily_delta(index);
    detail::write_dated_series(detail::stage_path(cfg, "deltas.csv"), "delta",
                               out.deltas.dates, out.deltas.values);

    if (out.deltas.values.size() < cfg.window) {
      throw Error(ErrorKind::data,
                  "series too short for the smoothing window: " +
                      std::to_string(out.deltas.values.size()) +
                      " deltas < window " + std::to_string(cfg.window));
    }
    out.smoothed =
        rolling_mean(out.deltas.values, static_cast<std::size_t>(cfg.window));
    out.smoothed_dates.assign(out.deltas.dates.begin() + (cfg.window - 1),
                              out.deltas.dates.end());
    detail::write_dated_series(detail::stage_path(cfg, "smoothed.csv"),
                               "smoothed_delta", out.smoothed_dates,
                               out.smoothed);

    out.prominence_used =
        cfg.prominence ? *cfg.prominence
                       : 0.5 * detail::sample_std(out.smoothed);
    out.peaks = find_peaks(out.smoothed, static_cast<std::size_t>(cfg.distance),
                           out.prominence_used);
    out.valleys = find_valleys(
        out.smoothed, static_cast<std::size_t>(cfg.distance),
        out.prominence_used);
    detail::write_extrema_csv(detail::stage_path(cfg, "extrema.csv"), out.peaks,
                              out.valleys, out.smoothed_dates, out.smoothed,
                              static_cast<std::size_t>(cfg.distance),
                              out.prominence_used);

    out.cumulative = cumulative_change(out.deltas.values);
    detail::write_dated_series(detail::stage_path(cfg, "cumulative.csv"),
                               "cumulative_change", out.deltas.dates,
                               out.cumulative);

    EventCalendar calendar;
    {
      std::ifstream in = open_input(cfg.events);
      calendar = read_event_calendar(in);
    }
    const EventIndicator delta_indicator =
        event_indicator(out.deltas.dates, calendar);
    out.events_marked = static_cast<std::size_t>(
        std::count(delta_indicator.values.begin(), delta_indicator.values.end(),
                   1));
    out.events_uncovered = delta_indicator.uncovered.size();
    out.comparison =
        event_day_comparison(out.deltas.values, delta_indicator.values);

    std::vector<double> correlate;
    std::vector<int> indicator;
    const char* correlate_name = "delta";
    if (cfg.event_correlate == EventCorrelate::smoothed) {
      correlate = out.smoothed;
      indicator = event_indicator(out.smoothed_dates, calendar).values;
      correlate_name = "smoothed";
    } else {
      correlate = out.deltas.values;
      indicator = delta_indicator.values;
      if (cfg.event_correlate == EventCorrelate::abs_delta) {
        for (double& v : correlate) v = std::abs(v);
        correlate_name = "abs_delta";
      }
    }
    try {
      std::vector<double> indicator_real(indicator.begin(), indicator.end());
      out.event_correlation = pearson(correlate, indicator_real);
    } catch (const Error&) {
      out.event_correlation.reset();  // constant input: no event variation
    }

    {
      std::ofstream os =
          open_output(detail::stage_path(cfg, "event_stats.csv"));
      write_csv_row(os, {"correlate", "r", "p_value", "n", "dof", "mean_event",
                         "mean_non_event", "events_in_series",
                         "events_uncovered"});
      std::vector<std::string> row(9);
      row[0] = correlate_name;
      if (out.event_correlation) {
        row[1] = format_double(out.event_correlation->r);
        row[2] = format_double(out.event_correlation->p_value);
        row[3] = std::to_string(out.event_correlation->n);
        row[4] = std::to_string(out.event_correlation->dof);
      }
      if (out.comparison.mean_event) {
        row[5] = format_double(*out.comparison.mean_event);
      }
      if (out.comparison.mean_non_event) {
        row[6] = format_double(*out.comparison.mean_non_event);
      }
      row[7] = std::to_string(out.events_marked);
      row[8] = std::to_string(out.events_uncovered);
      write_csv_row(os, row);
    }

    // Correlation matrix and contributions need the feature artifacts; a
    // hand-written index series alone still gets the series analytics.
    bool have_features = false;
    FeatureMatrix features;
    WeightVector weights;
    {
      std::ifstream fin(detail::stage_path(cfg, "features.csv"));
      std::ifstream win(detail::stage_path(cfg, "weights.csv"));
      if (fin && win) {
        features = read_feature_matrix(fin);
        weights = read_weight_vector(win);
        have_features = features.dates == index.dates;
      }
    }
    ContributionReport contributions;
    if (have_features) {
      const NormalizedMatrix normalized = minmax_normalize(features.values);
      Matrix with_index(normalized.values.rows, kFeatureCount + 1);
      for (std::size_t r = 0; r < normalized.values.rows; ++r) {
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
          with_index.at(r, c) = normalized.values.at(r, c);
        }
        with_index.at(r, kFeatureCount) = index.csei[r];
      }
      std::vector<std::string> names(kFeatureNames.begin(),
                                     kFeatureNames.end());
      names.push_back("csei");
      detail::write_correlation_matrix_csv(
          detail::stage_path(cfg, "correlation_matrix.csv"), names,
          correlation_matrix(with_index));
      contributions = contribution_decomposition(normalized.values, weights);
    }

    const std::vector<DateGap> gaps = find_date_gaps(index.dates);

    {
      std::ofstream os = open_output(detail::stage_path(cfg, "summary.md"));
      os << "# Index analysis summary\n\n";
      os << "## Series\n";
      os << "- days: " << index.dates.size() << " (" <<
          index.dates.front().to_string() << " to "
         << index.dates.back().to_string() << ")\n";
      double lo = index.csei[0], hi = index.csei[0], mean = 0.0;
      for (double v : index.csei) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v;
      }
      mean /= static_cast<double>(index.csei.size());
      os << "- index mean " << format_double(mean) << ", min "
         << format_double(lo) << ", max " << format_double(hi) << "\n";
      os << "- calendar gaps larger than one day: " << gaps.size() << "\n";
      for (const DateGap& g : gaps) {
        os << "  - " << g.from.to_string() << " to " << g.to.to_string()
           << " (" << g.days << " days)\n";
      }
      os << "\n## Smoothing and extrema\n";
      os << "- window " << cfg.window << ": " << out.deltas.values.size()
         << " deltas, " << out.smoothed.size() << " smoothed samples\n";
      os << "- distance " << cfg.distance << ", prominence "
         << format_double(out.prominence_used)
         << (cfg.prominence ? "" : " (auto)") << "\n";
      os << "- peaks: " << out.peaks.indices.size() << "\n";
      for (std::size_t i = 0; i < out.peaks.indices.size(); ++i) {
        os << "  - " << out.smoothed_dates[out.peaks.indices[i]].to_string()
           << " (prominence " << format_double(out.peaks.prominences[i])
           << ")\n";
      }
      os << "- valleys: " << out.valleys.indices.size() << "\n";
      for (std::size_t i = 0; i < out.valleys.indices.size(); ++i) {
        os << "  - " << out.smoothed_dates[out.valleys.indices[i]].to_string()
           << " (prominence " << format_double(out.valleys.prominences[i])
           << ")\n";
      }
      os << "\n## Events\n";
      os << "- calendar entries: " << calendar.dates.size()
         << ", on series dates: " << out.events_marked << ", uncovered: "
         << out.events_uncovered << "\n";
      if (out.comparison.mean_event) {
        os << "- mean delta on event days: "
           << format_double(*out.comparison.mean_event) << "\n";
      } else {
        os << "- mean delta on event days: undefined (no event days)\n";
      }
      if (out.comparison.mean_non_event) {
        os << "- mean delta on non-event days: "
           << format_double(*out.comparison.mean_non_event) << "\n";
      } else {
        os << "- mean delta on non-event days: undefined\n";
      }
      if (out.event_correlation) {
        os << "- correlation (" << correlate_name
           << " vs event indicator): r = "
           << format_double(out.event_correlation->r)
           << ", p = " << format_double(out.event_correlation->p_value)
           << " (n = " << out.event_correlation->n << ")\n";
      } else {
        os << "- correlation: undefined (constant input)\n";
      }
      if (have_features) {
        double s = 0.0, e = 0.0, q = 0.0;
        const double n = static_cast<double>(contributions.sentiment.size());
        for (double v : contributions.sentiment) s += v;
        for (double v : contributions.engagement) e += v;
        for (double v : contributions.quality) q += v;
        os << "\n## Mean group contributions\n";
        os << "- sentiment: " << format_double(s / n) << "\n";
        os << "- engagement: " << format_double(e / n) << "\n";
        os << "- quality: " << format_double(q / n) << "\n";
      }
    }

    if (cfg.plots) {
      const auto dates_x = [](const std::vector<Date>& dates) {
        std::vector<double> x;
        x.reserve(dates.size());
        for (const Date& d : dates) x.push_back(static_cast<double>(d.days));
        return x;
      };
      {
        std::ofstream os = open_output(detail::stage_path(cfg, "index.svg"));
        write_line_chart(os, "Daily index",
                         {{"index", "#1f77b4", dates_x(index.dates),
                           index.csei}});
      }
      {
        std::ofstream os =
            open_output(detail::stage_path(cfg, "cumulative.svg"));
        std::vector<ChartMarker> markers;
        for (const Date& d : calendar.dates) {
          markers.push_back(
              {static_cast<double>(d.days), 0.0, "#d62728", true});
        }
        write_line_chart(os, "Cumulative change with event markers",
                         {{"cumulative change", "#2ca02c",
                           dates_x(out.deltas.dates), out.cumulative}},
                         markers);
      }
      {
        std::ofstream os = open_output(detail::stage_path(cfg, "smoothed.svg"));
        std::vector<ChartMarker> markers;
        for (std::size_t t : out.peaks.indices) {
          markers.push_back({static_cast<double>(out.smoothed_dates[t].days),
                             out.smoothed[t], "#d62728", false});
        }
        for (std::size_t t : out.valleys.indices) {
          markers.push_back({static_cast<double>(out.smoothed_dates[t].days),
                             out.smoothed[t], "#1f77b4", false});
        }
        write_line_chart(os, "Smoothed daily change with extrema",
                         {{"smoothed delta", "#444444",
                           dates_x(out.smoothed_dates), out.smoothed}},
                         markers);
      }
      if (have_features) {
        std::ofstream os =
            open_output(detail::stage_path(cfg, "contributions.svg"));
        std::vector<ChartSeries> layers;
        const std::vector<double> x = dates_x(index.dates);
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
          ChartSeries layer;
          layer.label = kFeatureNames[c];
          layer.color = detail::kFeaturePalette[c];
          layer.x = x;
          layer.y.resize(contributions.per_feature.rows);
          for (std::size_t r = 0; r < contributions.per_feature.rows; ++r) {
            layer.y[r] = contributions.per_feature.at(r, c);
          }
          layers.push_back(std::move(layer));
        }
        write_stack_chart(os, "Per-feature index contributions", x, layers);
      }
    }

    ordered_json meta = detail::load_metadata(cfg.output_dir);
    detail::stamp_stage(meta, cfg, "analyze");
    ordered_json stage;
    stage["days"] = index.dates.size();
    stage["deltas"] = out.deltas.values.size();
    stage["smoothed"] = out.smoothed.size();
    stage["prominence_used"] = out.prominence_used;
    stage["peaks"] = out.peaks.indices.size();
    stage["valleys"] = out.valleys.indices.size();
    stage["events_in_series"] = out.events_marked;
    ordered_json uncovered = ordered_json::array();
    for (const Date& d : delta_indicator.uncovered) {
      uncovered.push_back(d.to_string());
    }
    stage["events_uncovered"] = uncovered;
    ordered_json gap_list = ordered_json::array();
    for (const DateGap& g : gaps) {
      ordered_json item;
      item["from"] = g.from.to_string();
      item["to"] = g.to.to_string();
      item["days"] = g.days;
      gap_list.push_back(item);
    }
    stage["gaps"] = gap_list;
    stage["correlate"] = correlate_name;
    if (out.event_correlation) {
      stage["r"] = out.event_correlation->r;
      stage["p_value"] = out.event_correlation->p_value;
    }
    stage["correlation_matrix"] = have_features;
    meta["stages"]["analyze"] = stage;
    detail::save_metadata(cfg.output_dir, meta);
    return out;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("analyze", e);
  }
}

// ingest -> build -> analyze under one lock.
inline void run_all(const RunConfig& cfg) {
  run_ingest(cfg);
  run_build(cfg);
  run_analyze(cfg);
}

}  // namespace csei
