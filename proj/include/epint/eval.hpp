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

#ifndef EPINT_EVAL_HPP
#define EPINT_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epint/rank.hpp"

namespace epint {

/// One annotator's binary relevance call on a (query, tweet) pair.
struct Judgment {
  std::string query_id;
  std::string tweet_id;
  std::string annotator;
  int label = 0;  // 0 or 1
};

/// Ranked retrieval result with aligned binary ratings. total_relevant is
/// the relevant count for the whole query (the AP denominator), which may
/// exceed the 1s present when the list is truncated.
struct RankedList {
  std::string query_id;
  std::vector<std::string> items;
  std::vector<int> ratings;
  int total_relevant = 0;
};

// ---------------------------------------------------------------------------
// judgment files: CSV with header query_id,tweet_id,annotator,label

inline std::vector<Judgment> load_judgments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open judgment file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "query_id,tweet_id,annotator,label")
    throw IoError(path + ": expected header 'query_id,tweet_id,annotator,label'");
  std::vector<Judgment> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 4)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    Judgment j;
    j.query_id = trim(fields[0]);
    j.tweet_id = trim(fields[1]);
    j.annotator = trim(fields[2]);
    std::string label = trim(fields[3]);
    if (label != "0" && label != "1")
      throw IoError(path + ":" + std::to_string(lineno) + ": label must be 0 or 1");
    j.label = label == "1" ? 1 : 0;
    if (!seen.insert({j.query_id, j.tweet_id, j.annotator}).second)
      throw IoError(path + ":" + std::to_string(lineno) + ": duplicate judgment for (" +
                    j.query_id + ", " + j.tweet_id + ", " + j.annotator + ")");
    out.push_back(std::move(j));
  }
  return out;
}

inline void save_judgments(const std::string& path, const std::vector<Judgment>& judgments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write judgment file '" + path + "'");
  out << "query_id,tweet_id,annotator,label\n";
  for (const Judgment& j : judgments)
    out << j.query_id << ',' << j.tweet_id << ',' << j.annotator << ',' << j.label << '\n';
}

/// Majority label over an odd panel of annotators.
inline int majority_vote(const std::vector<Judgment>& judgments) {
  if (judgments.empty() || judgments.size() % 2 == 0)
    throw Error("majority_vote: tie possible, require odd panel (got " +
                std::to_string(judgments.size()) + " judgments)");
  size_t ones = 0;
  for (const Judgment& j : judgments) ones += j.label ? 1 : 0;
  return ones * 2 > judgments.size() ? 1 : 0;
}

// ---------------------------------------------------------------------------
// metrics

/// Relevant count in the top n, divided by n (denominator stays n even
/// when fewer items were retrieved).
inline double precision_at_n(const RankedList& list, size_t n) {
  if (n == 0) throw Error("precision_at_n: n must be >= 1");
  size_t hits = 0;
  for (size_t j = 0; j < std::min(n, list.ratings.size()); ++j)
    hits += list.ratings[j] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(n);
}

/// Mean of P@n over the relevant positions, normalized by the query's
/// total relevant count.
inline double average_precision(const RankedList& list) {
  if (list.total_relevant < 1)
    throw Error("average_precision: query has no relevant documents");
  double sum = 0.0;
  size_t hits = 0;
  for (size_t j = 0; j < list.ratings.size(); ++j) {
    if (!list.ratings[j]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(j + 1);
  }
  return sum / static_cast<double>(list.total_relevant);
}

/// Unweighted mean AP; queries without relevant documents are skipped
/// with a warning line appended to `warnings` when given.
inline double mean_average_precision(const std::vector<RankedList>& lists,
                                     std::vector<std::string>* warnings = nullptr) {
  double sum = 0.0;
  size_t counted = 0;
  for (const RankedList& list : lists) {
    if (list.total_relevant < 1) {
      if (warnings)
        warnings->push_back("query " + list.query_id + " has no relevant documents; skipped");
      continue;
    }
    sum += average_precision(list);
    ++counted;
  }
  if (counted == 0) throw Error("mean_average_precision: no query has relevant documents");
  return sum / static_cast<double>(counted);
}

/// DCG@n = sum (2^r(j) - 1)/log(1+j), normalized by the DCG of the
/// ratings sorted descending. The log base cancels; natural log used.
inline double ndcg_at_n(const RankedList& list, size_t n) {
  if (n == 0) throw Error("ndcg_at_n: n must be >= 1");
  auto dcg = [n](const std::vector<int>& ratings) {
    double sum = 0.0;
    for (size_t j = 0; j < std::min(n, ratings.size()); ++j)
      sum += (std::pow(2.0, ratings[j]) - 1.0) / std::log(static_cast<double>(j + 2));
    return sum;
  };
  std::vector<int> ideal(list.ratings);
  std::sort(ideal.begin(), ideal.end(), std::greater<int>());
  double z = dcg(ideal);
  if (z == 0.0) throw Error("ndcg_at_n: all ratings zero, gain undefined");
  return dcg(list.ratings) / z;
}

// ---------------------------------------------------------------------------
// cross-validation harness

struct CvParams {
  int folds = 10;
  double train_fraction = 0.8;
  double lambda = 1e-3;
  int64_t steps = 100000;
  uint64_t seed = 0;
};

/// Metric means per mask; a metric undefined in every fold stays absent.
struct CvResult {
  std::vector<std::string> mask_names;                 // report order
  std::vector<std::string> metric_names;               // fixed order
  std::map<std::string, std::map<std::string, std::optional<double>>> values;
  std::vector<std::string> warnings;
};

inline const std::vector<std::string>& cv_metric_names() {
  static const std::vector<std::string> names = {"p@1",    "p@3",    "p@5",   "p@10", "map",
                                                 "ndcg@1", "ndcg@3", "ndcg@5", "ndcg@10"};
  return names;
}

/// Repeated random train/test splits BY TWEET: each fold shuffles the
/// distinct tweet ids, trains every masked model on the train side, ranks
/// the test side per query, and averages the metrics over folds.
inline CvResult cross_validate(const std::vector<LabeledExample>& examples,
                               const std::vector<FeatureMask>& masks, const CvParams& params) {
  if (params.folds < 2) throw ConfigError("cross_validate: folds must be >= 2");
  if (params.train_fraction <= 0.0 || params.train_fraction >= 1.0)
    throw ConfigError("cross_validate: train_fraction must be in (0,1)");
  bool has_pos = false, has_neg = false;
  for (const auto& e : examples) (e.label ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw Error("cross_validate: examples span a single label");

  std::set<std::string> id_set;
  for (const auto& e : examples) id_set.insert(e.tweet_id);
  std::vector<std::string> ids(id_set.begin(), id_set.end());

  CvResult result;
  result.metric_names = cv_metric_names();
  for (const auto& mask : masks) result.mask_names.push_back(mask_name(mask));

  // per mask, per metric: sum and fold count where defined
  std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;

  for (int fold = 0; fold < params.folds; ++fold) {
    Rng rng = Rng::derive(params.seed, static_cast<uint64_t>(fold));
    std::vector<std::string> shuffled(ids);
    rng.shuffle(shuffled);
    size_t n_train = static_cast<size_t>(
        std::llround(params.train_fraction * static_cast<double>(shuffled.size())));
    n_train = std::min(std::max<size_t>(n_train, 1), shuffled.size() - 1);
    std::set<std::string> train_ids(shuffled.begin(), shuffled.begin() + n_train);

    std::vector<LabeledExample> train, test;
    for (const auto& e : examples)
      (train_ids.count(e.tweet_id) ? train : test).push_back(e);

    for (size_t mi = 0; mi < masks.size(); ++mi) {
      const std::string& mname = result.mask_names[mi];
      RankingModel model;
      try {
        model = train_spd(train, masks[mi], params.lambda, params.steps,
                          splitmix64(params.seed + static_cast<uint64_t>(fold) * 131 + mi));
      } catch (const Error& e) {
        result.warnings.push_back("fold " + std::to_string(fold) + " mask " + mname +
                                  ": " + e.what());
        continue;
      }

      // group test examples by query, rank, score
      std::map<std::string, std::vector<const LabeledExample*>> by_query;
      for (const auto& e : test) by_query[e.query_id].push_back(&e);

      std::vector<RankedList> lists;
      for (const auto& [qid, query_examples] : by_query) {
        std::vector<RankCandidate> cands;
        std::map<std::string, int> label_of;
        for (const LabeledExample* e : query_examples) {
          cands.push_back({e->tweet_id, e->timestamp, e->features});
          label_of[e->tweet_id] = e->label;
        }
        Query q;
        q.id = qid;
        RankedList list;
        list.query_id = qid;
        list.items = rank_tweets(model, q, std::move(cands));
        for (const auto& id : list.items) {
          list.ratings.push_back(label_of[id]);
          list.total_relevant += label_of[id];
        }
        lists.push_back(std::move(list));
      }

      auto record = [&](const std::string& metric, std::optional<double> v) {
        if (!v) return;
        auto& slot = acc[mname][metric];
        slot.first += *v;
        slot.second += 1;
      };

      for (size_t n : {size_t{1}, size_t{3}, size_t{5}, size_t{10}}) {
        double sum = 0.0;
        for (const auto& list : lists) sum += precision_at_n(list, n);
        record("p@" + std::to_string(n),
               lists.empty() ? std::nullopt
                             : std::optional<double>(sum / static_cast<double>(lists.size())));
      }
      try {
        record("map", mean_average_precision(lists, &result.warnings));
      } catch (const Error&) {
        result.warnings.push_back("fold " + std::to_string(fold) + " mask " + mname +
                                  ": map undefined (single-label test set)");
      }
      for (size_t n : {size_t{1}, size_t{3}, size_t{5}, size_t{10}}) {
        double sum = 0.0;
        int counted = 0;
        for (const auto& list : lists) {
          if (list.total_relevant == 0) continue;  // gain undefined
          sum += ndcg_at_n(list, n);
          ++counted;
        }
        record("ndcg@" + std::to_string(n),
               counted ? std::optional<double>(sum / counted) : std::nullopt);
      }
    }
  }

  for (const auto& mname : result.mask_names)
    for (const auto& metric : result.metric_names) {
      auto mit = acc.find(mname);
      if (mit != acc.end() && mit->second.count(metric)) {
        auto [sum, n] = mit->second.at(metric);
        result.values[mname][metric] = sum / n;
      } else {
        result.values[mname][metric] = std::nullopt;
      }
    }
  return result;
}

// ---------------------------------------------------------------------------
// reports

/// CSV `mask,metric,value`; value empty when the metric is absent.
inline std::string write_metrics_csv(const CvResult& result) {
  std::string out = "mask,metric,value\n";
  for (const auto& mname : result.mask_names)
    for (const auto& metric : result.metric_names) {
      out += mname + "," + metric + ",";
      const auto& v = result.values.at(mname).at(metric);
      if (v) out += format_double(*v);
      out += '\n';
    }
  return out;
}

/// Fixed-width methods-by-metrics table for reading at the terminal.
inline std::string write_metrics_table(const CvResult& result) {
  size_t width = 12;
  for (const auto& mname : result.mask_names) width = std::max(width, mname.size() + 2);
  std::string out(width, ' ');
  for (const auto& metric : result.metric_names) {
    std::string cell = metric;
    cell.resize(9, ' ');
    out += cell;
  }
  out += '\n';
  for (const auto& mname : result.mask_names) {
    std::string row = mname;
    row.resize(width, ' ');
    for (const auto& metric : result.metric_names) {
      const auto& v = result.values.at(mname).at(metric);
      char buf[16];
      if (v)
        std::snprintf(buf, sizeof(buf), "%-9.4f", *v);
      else
        std::snprintf(buf, sizeof(buf), "%-9s", "-");
      row += buf;
    }
    out += row + '\n';
  }
  return out;
}

}  // namespace epint

#endif  // EPINT_EVAL_HPP
