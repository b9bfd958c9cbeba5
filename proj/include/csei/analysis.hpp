#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "csei/csv.hpp"
#include "csei/date.hpp"
#include "csei/errors.hpp"
#include "csei/index.hpp"

namespace csei {

struct DeltaSeries {
  std::vector<Date> dates;    // date the change ends on
  std::vector<double> values; // length = index length - 1
};

inline DeltaSeries daily_delta(const IndexSeries& series) {
  if (series.csei.size() < 2) {
    throw Error(ErrorKind::dimension,
                "daily delta needs at least 2 index values");
  }
  DeltaSeries out;
  out.dates.assign(series.dates.begin() + 1, series.dates.end());
  out.values.resize(series.csei.size() - 1);
  for (std::size_t i = 1; i < series.csei.size(); ++i) {
    out.values[i - 1] = series.csei[i] - series.csei[i - 1];
  }
  return out;
}

// Trailing mean over full windows only: output[i] = mean(x[i .. i+w-1]),
// length n - w + 1.
inline std::vector<double> rolling_mean(const std::vector<double>& x,
                                        std::size_t w) {
  if (w < 1) throw Error(ErrorKind::config, "window must be >= 1");
  if (x.size() < w) {
    throw Error(ErrorKind::dimension,
                "series shorter than the smoothing window (" +
                    std::to_string(x.size()) + " < " + std::to_string(w) + ")");
  }
  std::vector<double> out(x.size() - w + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < w; ++k) sum += x[i + k];
    out[i] = sum / static_cast<double>(w);
  }
  return out;
}

struct Extrema {
  std::vector<std::size_t> indices;
  std::vector<double> prominences;
};

// A peak is an interior sample strictly above its neighbors out to
// distance d (where those exist), whose height over the minimum of the
// clipped window [t-d, t+d] reaches p. Candidates can never sit within d
// of each other (each would have to dominate the other), so the
// higher-wins thinning clause never fires; it stays here to keep the
// implementation aligned with the stated rule.
inline Extrema find_peaks(const std::vector<double>& s, std::size_t d,
                          double p) {
  if (d < 1) throw Error(ErrorKind::config, "peak distance must be >= 1");
  if (p < 0.0) {
    throw Error(ErrorKind::config, "prominence threshold must be >= 0");
  }
  const std::size_t n = s.size();
  Extrema candidates;
  for (std::size_t t = 1; t + 1 < n; ++t) {
    bool dominates = true;
    for (std::size_t k = 1; k <= d && dominates; ++k) {
      if (t >= k && !(s[t] > s[t - k])) dominates = false;
      if (t + k < n && !(s[t] > s[t + k])) dominates = false;
    }
    if (!dominates) continue;
    const std::size_t lo = t >= d ? t - d : 0;
    const std::size_t hi = std::min(n - 1, t + d);
    double window_min = s[lo];
    for (std::size_t i = lo + 1; i <= hi; ++i) {
      window_min = std::min(window_min, s[i]);
    }
    const double prominence = s[t] - window_min;
    if (prominence < p) continue;
    candidates.indices.push_back(t);
    candidates.prominences.push_back(prominence);
  }

  std::vector<std::size_t> order(candidates.indices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ha = s[candidates.indices[a]];
    const double hb = s[candidates.indices[b]];
    if (ha != hb) return ha > hb;
    return candidates.indices[a] < candidates.indices[b];
  });
  std::vector<bool> keep(candidates.indices.size(), false);
  for (std::size_t oi : order) {
    const std::size_t t = candidates.indices[oi];
    bool blocked = false;
    for (std::size_t oj = 0; oj < keep.size() && !blocked; ++oj) {
      if (!keep[oj]) continue;
      const std::size_t u = candidates.indices[oj];
      const std::size_t gap = t > u ? t - u : u - t;
      blocked = gap < d;
    }
    if (!blocked) keep[oi] = true;
  }

  Extrema out;
  for (std::size_t i = 0; i < candidates.indices.size(); ++i) {
    if (keep[i]) {
      out.indices.push_back(candidates.indices[i]);
      out.prominences.push_back(candidates.prominences[i]);
    }
  }
  return out;
}

inline Extrema find_valleys(const std::vector<double>& s, std::size_t d,
                            double p) {
  std::vector<double> negated(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) negated[i] = -s[i];
  return find_peaks(negated, d, p);
}

// Prefix sums of the deltas (cumulative change since the series start).
inline std::vector<double> cumulative_change(const std::vector<double>& delta) {
  std::vector<double> out(delta.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    sum += delta[i];
    out[i] = sum;
  }
  return out;
}

struct EventCalendar {
  std::vector<Date> dates;          // sorted, unique
  std::vector<std::string> labels;  // parallel to dates
};

inline EventCalendar read_event_calendar(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) {
    throw Error(ErrorKind::schema, "events file is empty");
  }
  if (fields != std::vector<std::string>{"date", "label"}) {
    throw Error(ErrorKind::schema, "events header must be date,label");
  }
  EventCalendar out;
  std::uint64_t row = 1;
  while (read_csv_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2) {
      throw Error(ErrorKind::schema,
                  "events row " + std::to_string(row) + ": wrong field count");
    }
    const std::optional<Date> d = Date::parse(fields[0]);
    if (!d) {
      throw Error(ErrorKind::schema, "events row " + std::to_string(row) +
                                         ": unparseable date " + fields[0]);
    }
    if (!out.dates.empty() && !(out.dates.back() < *d)) {
      throw Error(ErrorKind::data,
                  "event dates must be sorted and unique; violation at row " +
                      std::to_string(row));
    }
    out.dates.push_back(*d);
    out.labels.push_back(fields[1]);
  }
  return out;
}

struct EventIndicator {
  std::vector<int> values;      // 1 on calendar dates, aligned to the input
  std::vector<Date> uncovered;  // calendar dates absent from the series
};

inline EventIndicator event_indicator(const std::vector<Date>& dates,
                                      const EventCalendar& calendar) {
  EventIndicator out;
  out.values.assign(dates.size(), 0);
  for (std::size_t i = 0; i < dates.size(); ++i) {
    if (std::binary_search(calendar.dates.begin(), calendar.dates.end(),
                           dates[i])) {
      out.values[i] = 1;
    }
  }
  for (const Date& d : calendar.dates) {
    if (!std::binary_search(dates.begin(), dates.end(), d)) {
      out.uncovered.push_back(d);
    }
  }
  return out;
}

struct EventComparison {
  std::optional<double> mean_event;      // empty when no event days exist
  std::optional<double> mean_non_event;  // empty when every day is an event
};

inline EventComparison event_day_comparison(const std::vector<double>& delta,
                                            const std::vector<int>& indicator) {
  if (delta.size() != indicator.size()) {
    throw Error(ErrorKind::dimension,
                "delta and event indicator differ in length");
  }
  double event_sum = 0.0, other_sum = 0.0;
  std::size_t event_n = 0, other_n = 0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (indicator[i] == 1) {
      event_sum += delta[i];
      ++event_n;
    } else {
      other_sum += delta[i];
      ++other_n;
    }
  }
  EventComparison out;
  if (event_n > 0) out.mean_event = event_sum / static_cast<double>(event_n);
  if (other_n > 0) {
    out.mean_non_event = other_sum / static_cast<double>(other_n);
  }
  return out;
}

struct DateGap {
  Date from;
  Date to;
  std::int32_t days;  // to - from
};

// Calendar discontinuities (zero-post days) that distort day-over-day
// differencing; reported so users can judge the damage.
inline std::vector<DateGap> find_date_gaps(const std::vector<Date>& dates) {
  std::vector<DateGap> gaps;
  for (std::size_t i = 1; i < dates.size(); ++i) {
    const std::int32_t step = dates[i].days - dates[i - 1].days;
    if (step > 1) gaps.push_back({dates[i - 1], dates[i], step});
  }
  return gaps;
}

}  // namespace csei
