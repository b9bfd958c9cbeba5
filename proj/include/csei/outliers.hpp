#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "csei/csv.hpp"
#include "csei/date.hpp"
#include "csei/errors.hpp"
#include "csei/isolation_forest.hpp"
#include "csei/matrix.hpp"
#include "csei/pca.hpp"

namespace csei {

// Flags the ceil(rate * n) highest scores; ties at the cut go to the lower
// row index. The small epsilon keeps ceil() honest when rate * n lands a
// hair above an integer (0.005 * 1000 in doubles).
inline std::vector<bool> contamination_filter(const std::vector<double>& scores,
                                              double rate) {
  if (rate < 0.0 || rate >= 1.0) {
    throw Error(ErrorKind::config, "contamination rate must lie in [0, 1)");
  }
  const std::size_t n = scores.size();
  std::vector<bool> flags(n, false);
  if (n == 0 || rate == 0.0) return flags;
  const double target = rate * static_cast<double>(n) - 1e-9;
  const std::size_t k =
      target <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(target));
  if (k == 0) return flags;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (scores[a] != scores[b]) return scores[a] > scores[b];
                     return a < b;
                   });
  for (std::size_t i = 0; i < std::min(k, n); ++i) flags[order[i]] = true;
  return flags;
}

struct PcFilterResult {
  std::vector<bool> flags;
  std::vector<double> pc1;
  std::vector<double> pc2;
  bool degenerate = false;  // rank-0 input: no projection, no flags
};

// Projects raw rows onto the first two principal axes and flags rows with
// PC1 < pc1_max and PC2 >= pc2_min. Thresholds are absolute, so the axis
// orientation convention in pca.hpp is load-bearing here.
inline PcFilterResult pc_score_filter(const Matrix& data, double pc1_max = 25.0,
                                      double pc2_min = 7.5) {
  if (data.cols < 2) {
    throw Error(ErrorKind::dimension, "pc_score_filter needs >= 2 columns");
  }
  if (data.rows < 3) {
    throw Error(ErrorKind::dimension, "pc_score_filter needs >= 3 rows");
  }
  PcFilterResult out;
  out.flags.assign(data.rows, false);
  out.pc1.assign(data.rows, 0.0);
  out.pc2.assign(data.rows, 0.0);

  const Matrix cov = covariance_matrix(data);
  double scale = 0.0;
  for (double v : cov.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    out.degenerate = true;
    return out;
  }

  const PrincipalAxes axes = principal_axes(data, 2);
  const Matrix scores = project_scores(data, axes);
  for (std::size_t r = 0; r < data.rows; ++r) {
    out.pc1[r] = scores.at(r, 0);
    out.pc2[r] = scores.at(r, 1);
    out.flags[r] = out.pc1[r] < pc1_max && out.pc2[r] >= pc2_min;
  }
  return out;
}

struct OutlierReport {
  std::vector<std::string> labels;  // date (daily mode) or post id
  std::vector<double> anomaly_scores;
  std::vector<bool> forest_flags;
  std::vector<double> pc1;
  std::vector<double> pc2;
  std::vector<bool> pc_flags;
  std::vector<std::size_t> removed_indices;  // sorted
  bool pc_degenerate = false;

  std::size_t size() const { return anomaly_scores.size(); }

  bool removed(std::size_t i) const {
    return forest_flags[i] || pc_flags[i];
  }
};

struct OutlierParams {
  std::size_t n_trees = 100;
  std::size_t subsample_size = 0;  // 0 means min(256, rows)
  std::uint64_t seed = 42;
  double contamination = 0.005;
  double pc1_max = 25.0;
  double pc2_min = 7.5;
};

// Full outlier stage: forest score + contamination cut, then the
// PC-threshold rule; a row is removed when either filter flags it.
inline OutlierReport detect_outliers(const Matrix& data,
                                     const std::vector<std::string>& labels,
                                     const OutlierParams& params) {
  if (labels.size() != data.rows) {
    throw Error(ErrorKind::dimension, "outlier labels/rows mismatch");
  }
  OutlierReport report;
  report.labels = labels;

  std::size_t subsample = params.subsample_size;
  if (subsample == 0) subsample = std::min<std::size_t>(256, data.rows);

  const IsolationForest forest =
      fit_isolation_forest(data, params.n_trees, subsample, params.seed);
  report.anomaly_scores = anomaly_scores(forest, data);
  report.forest_flags =
      contamination_filter(report.anomaly_scores, params.contamination);

  const PcFilterResult pc =
      pc_score_filter(data, params.pc1_max, params.pc2_min);
  report.pc1 = pc.pc1;
  report.pc2 = pc.pc2;
  report.pc_flags = pc.flags;
  report.pc_degenerate = pc.degenerate;

  for (std::size_t i = 0; i < report.size(); ++i) {
    if (report.removed(i)) report.removed_indices.push_back(i);
  }
  return report;
}

inline void write_outlier_report(std::ostream& os, const OutlierReport& report,
                                 const char* label_column = "date") {
  std::vector<std::string> row = {label_column, "anomaly_score", "forest_flag",
                                  "pc1",        "pc2",           "pc_flag",
                                  "removed"};
  write_csv_row(os, row);
  for (std::size_t i = 0; i < report.size(); ++i) {
    row[0] = report.labels[i];
    row[1] = format_double(report.anomaly_scores[i]);
    row[2] = report.forest_flags[i] ? "true" : "false";
    row[3] = format_double(report.pc1[i]);
    row[4] = format_double(report.pc2[i]);
    row[5] = report.pc_flags[i] ? "true" : "false";
    row[6] = report.removed(i) ? "true" : "false";
    write_csv_row(os, row);
  }
}

}  // namespace csei
