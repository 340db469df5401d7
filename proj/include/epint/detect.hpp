/**
 * Copyright (c) 2026 the epint authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#ifndef EPINT_DETECT_HPP
#define EPINT_DETECT_HPP

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "epint/index.hpp"

namespace epint {

/// Zero-filled daily count vector for one tracked term.
struct DailySeries {
  std::string term;
  Day start_day = 0;
  std::vector<int> counts;
};

enum class Method { C1, C2, C3, F_STAT, EWMA };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::C1: return "c1";
    case Method::C2: return "c2";
    case Method::C3: return "c3";
    case Method::F_STAT: return "f_stat";
    case Method::EWMA: return "ewma";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  std::string v = to_lower(trim(s));
  if (v == "c1") return Method::C1;
  if (v == "c2") return Method::C2;
  if (v == "c3") return Method::C3;
  if (v == "f_stat" || v == "f") return Method::F_STAT;
  if (v == "ewma") return Method::EWMA;
  throw ConfigError("unknown detection method '" + s + "'");
}

struct DetectorParams {
  Method method = Method::C1;
  int window = 15;       // baseline length, days
  int buffer = 5;        // guard gap between baseline and scored day
  double threshold = 3.0;
  double omega = 0.24;   // EWMA smoothing weight, (0,1]
  bool population_sd = false;  // divisor n instead of n-1

  /// Standard parametrization: thresholds 3.0 / 3.0 / 2.0 / 0.6 / 4.0.
  static DetectorParams defaults(Method m) {
    DetectorParams p;
    p.method = m;
    switch (m) {
      case Method::C1: p.threshold = 3.0; break;
      case Method::C2: p.threshold = 3.0; break;
      case Method::C3: p.threshold = 2.0; break;
      case Method::F_STAT: p.threshold = 0.6; break;
      case Method::EWMA: p.threshold = 4.0; break;
    }
    return p;
  }

  /// Alternative published threshold set with lower (more sensitive) cuts
  /// for C2 and C3.
  static DetectorParams sensitive(Method m) {
    DetectorParams p = defaults(m);
    if (m == Method::C2) p.threshold = 0.2;
    if (m == Method::C3) p.threshold = 0.3;
    return p;
  }
};

struct AlarmDay {
  Day date = 0;
  int count = 0;
  std::optional<double> statistic;  // absent during warm-up
  bool alarm = false;
};

struct AlarmReport {
  std::string term;
  Method method = Method::C1;
  std::vector<AlarmDay> days;
  std::optional<Day> first_alarm_date;
};

// ---------------------------------------------------------------------------

/// Counts, per day of `range`, the tweets whose tokens contain `term`.
/// Days with no matching tweets are zero-filled.
inline DailySeries aggregate_daily_counts(const InvertedIndex& index,
                                          const std::string& term,
                                          const DateInterval& range) {
  if (range.start > range.end) throw Error("aggregate_daily_counts: inverted range");
  DailySeries s;
  s.term = to_lower(trim(term));
  s.start_day = range.start;
  s.counts.assign(static_cast<size_t>(range.length()), 0);
  auto it = index.postings.find(s.term);
  if (it != index.postings.end()) {
    for (const std::string& id : it->second) {
      Day d = index.doc(id).day;
      if (range.contains(d)) ++s.counts[static_cast<size_t>(d - range.start)];
    }
  }
  return s;
}

/// Runs one aberration detector over a daily series.
///
/// For scored day t the baseline is the `window` counts ending buffer+1
/// days before t; mu/sd are its sample moments. When sd == 0 the statistic
/// is 0 if x_t <= mu, +inf otherwise (forced alarm on sparse series).
inline AlarmReport run_detector(const DailySeries& series, const DetectorParams& params) {
  if (params.window < 2) throw ConfigError("detector window must be >= 2");
  if (params.buffer < 0) throw ConfigError("detector buffer must be >= 0");
  if (params.threshold <= 0) throw ConfigError("detector threshold must be > 0");
  if (params.omega <= 0.0 || params.omega > 1.0)
    throw ConfigError("EWMA omega must be in (0,1]");

  const int n = static_cast<int>(series.counts.size());
  const int warmup = params.window + params.buffer;
  if (n < warmup + 1)
    throw Error("series too short: method needs at least window+buffer+1 = " +
                std::to_string(warmup + 1) + " days, got " + std::to_string(n));

  AlarmReport report;
  report.term = series.term;
  report.method = params.method;
  report.days.resize(static_cast<size_t>(n));

  const double inf = std::numeric_limits<double>::infinity();
  const auto& x = series.counts;

  // Rolling integer sums over the baseline window keep the incremental
  // moments exact.
  int64_t sum = 0, sumsq = 0;
  for (int i = 0; i < params.window; ++i) {
    sum += x[static_cast<size_t>(i)];
    sumsq += static_cast<int64_t>(x[static_cast<size_t>(i)]) * x[static_cast<size_t>(i)];
  }

  double ewma_z = 0.0;
  std::vector<double> c2_recent;  // up to the last 3 scored C2 values

  for (int t = 0; t < n; ++t) {
    AlarmDay& day = report.days[static_cast<size_t>(t)];
    day.date = series.start_day + t;
    day.count = x[static_cast<size_t>(t)];
    if (t < warmup) continue;

    if (t > warmup) {
      int enter = t - params.buffer - 1;
      int leave = enter - params.window;
      sum += x[static_cast<size_t>(enter)] - x[static_cast<size_t>(leave)];
      sumsq += static_cast<int64_t>(x[static_cast<size_t>(enter)]) * x[static_cast<size_t>(enter)] -
               static_cast<int64_t>(x[static_cast<size_t>(leave)]) * x[static_cast<size_t>(leave)];
    }

    const double mu = static_cast<double>(sum) / params.window;
    const int divisor = params.population_sd ? params.window : params.window - 1;
    double var = (static_cast<double>(sumsq) - static_cast<double>(sum) * sum / params.window) / divisor;
    if (var < 0) var = 0;  // guard against rounding
    const double sd = std::sqrt(var);
    const double xt = x[static_cast<size_t>(t)];

    const double c2 = sd > 0 ? (xt - mu) / sd : (xt <= mu ? 0.0 : inf);
    c2_recent.push_back(c2);
    if (c2_recent.size() > 3) c2_recent.erase(c2_recent.begin());

    if (params.method == Method::EWMA) {
      if (t == warmup) ewma_z = mu;  // seed with mean of the first complete baseline
      ewma_z = params.omega * xt + (1.0 - params.omega) * ewma_z;
    }

    double stat = 0.0;
    switch (params.method) {
      case Method::C1:
      case Method::C2:
        stat = c2;
        break;
      case Method::C3:
        // Accumulated recent excesses over the last (up to) 3 scored days.
        for (double v : c2_recent) stat += std::max(0.0, v - 1.0);
        break;
      case Method::EWMA:
        stat = sd > 0 ? (ewma_z - mu) / (sd * std::sqrt(params.omega / (2.0 - params.omega)))
                      : (xt <= mu ? 0.0 : inf);
        break;
      case Method::F_STAT: {
        double num = 0.0;
        for (int i = t - params.buffer; i <= t; ++i) {
          double diff = x[static_cast<size_t>(i)] - mu;
          num += diff * diff;
        }
        num /= params.buffer + 1;
        stat = var > 0 ? num / var : (xt <= mu ? 0.0 : inf);
        break;
      }
    }

    day.statistic = stat;
    day.alarm = stat > params.threshold;
    if (day.alarm && !report.first_alarm_date) report.first_alarm_date = day.date;
  }
  return report;
}

/// Product-moment correlation of two equal-length series.
inline double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("pearson_correlation: length mismatch");
  if (a.size() < 2) throw Error("pearson_correlation: need at least 2 points");
  const size_t n = a.size();
  double ma = 0, mb = 0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0, va = 0, vb = 0;
  for (size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0 || vb == 0)
    throw Error("pearson_correlation: undefined for constant input");
  return cov / std::sqrt(va * vb);
}

// ---------------------------------------------------------------------------
// exports

/// Shortest round-trip decimal form; stable across runs.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// CSV `date,count,statistic,alarm`; statistic empty during warm-up.
inline std::string write_series_csv(const AlarmReport& report) {
  std::string out = "date,count,statistic,alarm\n";
  for (const AlarmDay& d : report.days) {
    out += format_date(d.date);
    out += ',';
    out += std::to_string(d.count);
    out += ',';
    if (d.statistic) out += format_double(*d.statistic);
    out += ',';
    out += d.alarm ? '1' : '0';
    out += '\n';
  }
  return out;
}

/// One summary line: `term,method,first_alarm_date,n_alarm_days`.
inline std::string alarm_summary_line(const AlarmReport& report) {
  int n_alarms = 0;
  for (const AlarmDay& d : report.days) n_alarms += d.alarm ? 1 : 0;
  std::string out = report.term;
  out += ',';
  out += method_name(report.method);
  out += ',';
  if (report.first_alarm_date) out += format_date(*report.first_alarm_date);
  out += ',';
  out += std::to_string(n_alarms);
  return out;
}

}  // namespace epint

#endif  // EPINT_DETECT_HPP
