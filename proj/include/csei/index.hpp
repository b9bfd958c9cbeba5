#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csei/aggregate.hpp"
#include "csei/csv.hpp"
#include "csei/date.hpp"
#include "csei/errors.hpp"
#include "csei/matrix.hpp"
#include "csei/pca.hpp"

namespace csei {

struct NormalizationStats {
  std::vector<double> mins;
  std::vector<double> maxs;
  std::vector<bool> constant;  // max == min; column pinned to 0
};

struct NormalizedMatrix {
  Matrix values;
  NormalizationStats stats;
};

// Per-column (x - min) / (max - min). A constant column has no scale; it
// maps to all zeros and is flagged rather than dropped, keeping the column
// count stable for externally supplied weights.
inline NormalizedMatrix minmax_normalize(const Matrix& m) {
  if (m.empty()) {
    throw Error(ErrorKind::dimension, "cannot normalize an empty matrix");
  }
  NormalizedMatrix out;
  out.values = Matrix(m.rows, m.cols);
  out.stats.mins.resize(m.cols);
  out.stats.maxs.resize(m.cols);
  out.stats.constant.resize(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) {
    double lo = m.at(0, c), hi = m.at(0, c);
    for (std::size_t r = 1; r < m.rows; ++r) {
      lo = std::min(lo, m.at(r, c));
      hi = std::max(hi, m.at(r, c));
    }
    out.stats.mins[c] = lo;
    out.stats.maxs[c] = hi;
    out.stats.constant[c] = lo == hi;
    if (lo == hi) continue;  // column already zero-initialized
    const double span = hi - lo;
    for (std::size_t r = 0; r < m.rows; ++r) {
      out.values.at(r, c) = (m.at(r, c) - lo) / span;
    }
  }
  return out;
}

struct WeightVector {
  std::vector<double> weights;   // simplex weights, canonical column order
  std::vector<double> loadings;  // signed PC1 loadings behind the weights
  double explained_variance_ratio = 0.0;
};

// w(i) = |l(i)| / sum_j |l(j)|; sign-invariant by construction.
inline WeightVector weights_from_loadings(const std::vector<double>& loadings) {
  double total = 0.0;
  for (double l : loadings) total += std::abs(l);
  if (total == 0.0) {
    throw Error(ErrorKind::degenerate, "all loadings are zero");
  }
  WeightVector out;
  out.loadings = loadings;
  out.weights.resize(loadings.size());
  for (std::size_t i = 0; i < loadings.size(); ++i) {
    out.weights[i] = std::abs(loadings[i]) / total;
  }
  return out;
}

// PC1 loadings of the normalized matrix, folded to simplex weights.
inline WeightVector derive_weights(const Matrix& normalized) {
  const Pc1Result pc1 = pc1_loadings(normalized);
  WeightVector out = weights_from_loadings(pc1.loadings);
  out.explained_variance_ratio = pc1.explained_variance_ratio;
  return out;
}

struct IndexSeries {
  std::vector<Date> dates;
  std::vector<double> csei;
};

inline std::vector<double> weighted_index(const Matrix& normalized,
                                          const std::vector<double>& weights) {
  if (weights.size() != normalized.cols) {
    throw Error(ErrorKind::dimension,
                "weight count differs from feature count");
  }
  std::vector<double> series(normalized.rows, 0.0);
  for (std::size_t r = 0; r < normalized.rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < normalized.cols; ++c) {
      sum += weights[c] * normalized.at(r, c);
    }
    series[r] = sum;
  }
  return series;
}

// csei(t) = sum_i w(i) * x_norm(i, t). Values are not clamped: simplex
// weights keep them inside [0,1]; a loaded weight file summing slightly off
// 1 shows up honestly in the output.
inline IndexSeries compute_index(const std::vector<Date>& dates,
                                 const Matrix& normalized,
                                 const WeightVector& weights) {
  if (dates.size() != normalized.rows) {
    throw Error(ErrorKind::dimension, "date count differs from row count");
  }
  IndexSeries out;
  out.dates = dates;
  out.csei = weighted_index(normalized, weights.weights);
  return out;
}

struct ContributionReport {
  Matrix per_feature;  // contribution(i, t) = w(i) * x_norm(i, t)
  std::vector<double> sentiment;   // compound + emotion columns
  std::vector<double> engagement;  // score, post count, domain diversity
  std::vector<double> quality;     // readability, offensive
};

// Per-feature contributions plus the three reporting group sums. Expects
// the canonical 13-column layout for the grouping to mean anything.
inline ContributionReport contribution_decomposition(
    const Matrix& normalized, const WeightVector& weights) {
  if (weights.weights.size() != normalized.cols) {
    throw Error(ErrorKind::dimension,
                "weight count differs from feature count");
  }
  ContributionReport out;
  out.per_feature = Matrix(normalized.rows, normalized.cols);
  for (std::size_t r = 0; r < normalized.rows; ++r) {
    for (std::size_t c = 0; c < normalized.cols; ++c) {
      out.per_feature.at(r, c) = weights.weights[c] * normalized.at(r, c);
    }
  }
  if (normalized.cols == kFeatureCount) {
    out.sentiment.assign(normalized.rows, 0.0);
    out.engagement.assign(normalized.rows, 0.0);
    out.quality.assign(normalized.rows, 0.0);
    for (std::size_t r = 0; r < normalized.rows; ++r) {
      for (std::size_t c : kSentimentGroup) {
        out.sentiment[r] += out.per_feature.at(r, c);
      }
      for (std::size_t c : kEngagementGroup) {
        out.engagement[r] += out.per_feature.at(r, c);
      }
      for (std::size_t c : kQualityGroup) {
        out.quality[r] += out.per_feature.at(r, c);
      }
    }
  }
  return out;
}

inline double weight_sum(const WeightVector& w) {
  double sum = 0.0;
  for (double x : w.weights) sum += x;
  return sum;
}

inline void write_weight_vector(std::ostream& os, const WeightVector& w) {
  if (w.weights.size() != kFeatureCount ||
      w.loadings.size() != kFeatureCount) {
    throw Error(ErrorKind::dimension,
                "weight artifact requires the 13 canonical features");
  }
  write_csv_row(os, {"feature", "weight", "loading"});
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    write_csv_row(os, {kFeatureNames[i], format_double(w.weights[i]),
                       format_double(w.loadings[i])});
  }
}

// Accepts the 13 canonical features in any order, each exactly once.
// Weights must be non-negative and sum near 1; a published vector that sums
// to 1.0001 by rounding loads verbatim, without renormalization.
inline WeightVector read_weight_vector(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) {
    throw Error(ErrorKind::schema, "weight file is empty");
  }
  if (fields != std::vector<std::string>{"feature", "weight", "loading"}) {
    throw Error(ErrorKind::schema,
                "weight file header must be feature,weight,loading");
  }
  WeightVector out;
  out.weights.assign(kFeatureCount, 0.0);
  out.loadings.assign(kFeatureCount, 0.0);
  std::vector<bool> seen(kFeatureCount, false);
  std::uint64_t row = 1;
  while (read_csv_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3) {
      throw Error(ErrorKind::schema, "weight file row " + std::to_string(row) +
                                         ": wrong field count");
    }
    std::size_t idx = kFeatureCount;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (fields[0] == kFeatureNames[i]) {
        idx = i;
        break;
      }
    }
    if (idx == kFeatureCount) {
      throw Error(ErrorKind::schema,
                  "weight file row " + std::to_string(row) +
                      ": unknown feature " + fields[0]);
    }
    if (seen[idx]) {
      throw Error(ErrorKind::schema, "weight file lists " + fields[0] +
                                         " more than once");
    }
    seen[idx] = true;
    double weight = 0.0, loading = 0.0;
    if (!parse_double(fields[1], weight) || !parse_double(fields[2], loading)) {
      throw Error(ErrorKind::schema, "weight file row " + std::to_string(row) +
                                         ": unparseable value");
    }
    if (weight < 0.0) {
      throw Error(ErrorKind::data,
                  "weight for " + fields[0] + " is negative");
    }
    out.weights[idx] = weight;
    out.loadings[idx] = loading;
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!seen[i]) {
      throw Error(ErrorKind::schema, std::string("weight file missing ") +
                                         kFeatureNames[i]);
    }
  }
  const double sum = weight_sum(out);
  if (sum < 0.99 || sum > 1.01) {
    throw Error(ErrorKind::data,
                "weights sum to " + format_double(sum) +
                    "; expected a value within 1% of 1");
  }
  return out;
}

inline void write_index_series(std::ostream& os, const IndexSeries& series) {
  write_csv_row(os, {"date", "csei"});
  for (std::size_t i = 0; i < series.dates.size(); ++i) {
    write_csv_row(os,
                  {series.dates[i].to_string(), format_double(series.csei[i])});
  }
}

inline IndexSeries read_index_series(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) {
    throw Error(ErrorKind::schema, "index series file is empty");
  }
  if (fields != std::vector<std::string>{"date", "csei"}) {
    throw Error(ErrorKind::schema, "index series header must be date,csei");
  }
  IndexSeries out;
  std::uint64_t row = 1;
  while (read_csv_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2) {
      throw Error(ErrorKind::schema, "index series row " +
                                         std::to_string(row) +
                                         ": wrong field count");
    }
    const std::optional<Date> d = Date::parse(fields[0]);
    double value = 0.0;
    if (!d || !parse_double(fields[1], value)) {
      throw Error(ErrorKind::schema, "index series row " +
                                         std::to_string(row) +
                                         ": unparseable row");
    }
    if (!out.dates.empty() && !(out.dates.back() < *d)) {
      throw Error(ErrorKind::data,
                  "index series dates not strictly increasing at row " +
                      std::to_string(row));
    }
    out.dates.push_back(*d);
    out.csei.push_back(value);
  }
  return out;
}

}  // namespace csei
