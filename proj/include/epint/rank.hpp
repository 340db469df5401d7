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

#ifndef EPINT_RANK_HPP
#define EPINT_RANK_HPP

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "epint/context.hpp"
#include "epint/rng.hpp"

namespace epint {

enum Feature : int { F_MC = 0, F_L = 1, F_HASHTAG = 2, F_CC = 3, F_URL = 4 };
constexpr int kNumFeatures = 5;

inline const char* feature_name(int k) {
  static const char* names[kNumFeatures] = {"f_mc", "f_l", "f_hashtag", "f_cc", "f_url"};
  return names[k];
}

/// Five binary indicators: medical condition, location, hashtag,
/// complementary context, URL.
struct FeatureVector {
  std::array<double, kNumFeatures> values{};
};

using FeatureMask = std::array<bool, kNumFeatures>;

inline FeatureMask mask_all() { return {true, true, true, true, true}; }

inline FeatureMask mask_of(std::initializer_list<int> features) {
  FeatureMask m{};
  for (int k : features) m[static_cast<size_t>(k)] = true;
  return m;
}

inline std::string mask_name(const FeatureMask& m) {
  std::vector<std::string> names;
  for (int k = 0; k < kNumFeatures; ++k)
    if (m[static_cast<size_t>(k)]) names.push_back(feature_name(k));
  return join(names, "+");
}

/// Linear ranking function: weight vector plus the feature mask it was
/// trained under. Masked-out weights are exactly zero.
struct RankingModel {
  std::array<double, kNumFeatures> weights{};
  FeatureMask mask = mask_all();
  std::string trained_context;
  double lambda = 1e-3;
  int64_t steps = 100000;
  uint64_t seed = 0;
};

struct LabeledExample {
  std::string query_id;
  std::string tweet_id;
  Timestamp timestamp = 0;
  FeatureVector features;
  int label = 0;  // 0 or 1
};

// ---------------------------------------------------------------------------

/// Binary presence features for one (query, tweet) pair. The query is part
/// of the contract even though all five indicators are document-side.
inline FeatureVector extract_features(const Query& query, const TokenizedTweet& tweet,
                                      const Gazetteer& mc, const Gazetteer& loc,
                                      const Gazetteer& cc) {
  (void)query;
  FeatureVector fv;
  for (const std::string& tok : tweet.tokens) {
    if (mc.contains(tok)) fv.values[F_MC] = 1.0;
    if (loc.contains(tok)) fv.values[F_L] = 1.0;
    if (cc.contains(tok)) fv.values[F_CC] = 1.0;
  }
  if (!tweet.hashtags.empty()) fv.values[F_HASHTAG] = 1.0;
  if (tweet.has_url) fv.values[F_URL] = 1.0;
  return fv;
}

/// Dot product over the active mask.
inline double score(const RankingModel& model, const FeatureVector& features) {
  double s = 0.0;
  for (int k = 0; k < kNumFeatures; ++k)
    if (model.mask[static_cast<size_t>(k)])
      s += model.weights[static_cast<size_t>(k)] * features.values[static_cast<size_t>(k)];
  return s;
}

namespace detail {

/// Indices of positive/negative examples per query, restricted to queries
/// holding at least one of each.
struct PairPool {
  std::vector<std::string> query_ids;                  // sorted
  std::vector<std::vector<size_t>> positives;          // aligned with query_ids
  std::vector<std::vector<size_t>> negatives;
};

inline PairPool build_pair_pool(const std::vector<LabeledExample>& examples) {
  std::map<std::string, std::pair<std::vector<size_t>, std::vector<size_t>>> by_query;
  for (size_t i = 0; i < examples.size(); ++i) {
    auto& bucket = by_query[examples[i].query_id];
    (examples[i].label > 0 ? bucket.first : bucket.second).push_back(i);
  }
  PairPool pool;
  for (auto& [qid, bucket] : by_query) {
    if (bucket.first.empty() || bucket.second.empty()) continue;
    pool.query_ids.push_back(qid);
    pool.positives.push_back(std::move(bucket.first));
    pool.negatives.push_back(std::move(bucket.second));
  }
  return pool;
}

}  // namespace detail

/// Pegasos-style stochastic pairwise descent on the hinge objective
///   (lambda/2)|w|^2 + E[max(0, 1 - w.(phi_p - phi_n))],
/// pairs drawn uniformly within a uniformly chosen query that has both
/// labels; learning rate 1/(lambda*t).
inline RankingModel train_spd(const std::vector<LabeledExample>& examples,
                              const FeatureMask& mask, double lambda, int64_t steps,
                              uint64_t seed) {
  if (lambda <= 0) throw ConfigError("train_spd: lambda must be > 0");
  if (steps < 1) throw ConfigError("train_spd: steps must be >= 1");
  detail::PairPool pool = detail::build_pair_pool(examples);
  if (pool.query_ids.empty())
    throw Error("train_spd: degenerate labels, no query has both a relevant "
                "and a not-relevant example");

  RankingModel model;
  model.mask = mask;
  model.lambda = lambda;
  model.steps = steps;
  model.seed = seed;

  Rng rng(seed);
  auto& w = model.weights;
  for (int64_t t = 1; t <= steps; ++t) {
    size_t q = static_cast<size_t>(rng.uniform(pool.query_ids.size()));
    const auto& pos = pool.positives[q];
    const auto& neg = pool.negatives[q];
    const LabeledExample& p = examples[pos[rng.uniform(pos.size())]];
    const LabeledExample& n = examples[neg[rng.uniform(neg.size())]];

    std::array<double, kNumFeatures> diff{};
    double margin = 0.0;
    for (int k = 0; k < kNumFeatures; ++k) {
      if (!mask[static_cast<size_t>(k)]) continue;
      diff[static_cast<size_t>(k)] =
          p.features.values[static_cast<size_t>(k)] - n.features.values[static_cast<size_t>(k)];
      margin += w[static_cast<size_t>(k)] * diff[static_cast<size_t>(k)];
    }

    const double eta = 1.0 / (lambda * static_cast<double>(t));
    const double shrink = 1.0 - eta * lambda;  // = 1 - 1/t
    for (int k = 0; k < kNumFeatures; ++k) {
      if (!mask[static_cast<size_t>(k)]) continue;
      w[static_cast<size_t>(k)] *= shrink;
      if (margin < 1.0) w[static_cast<size_t>(k)] += eta * diff[static_cast<size_t>(k)];
    }
  }
  return model;
}

/// Regularized empirical objective over all valid pairs; the quantity
/// train_spd minimizes in expectation.
inline double pairwise_objective(const std::vector<LabeledExample>& examples,
                                 const RankingModel& model, double lambda) {
  detail::PairPool pool = detail::build_pair_pool(examples);
  double hinge_sum = 0.0;
  int64_t pairs = 0;
  for (size_t q = 0; q < pool.query_ids.size(); ++q)
    for (size_t pi : pool.positives[q])
      for (size_t ni : pool.negatives[q]) {
        double margin = score(model, examples[pi].features) - score(model, examples[ni].features);
        hinge_sum += std::max(0.0, 1.0 - margin);
        ++pairs;
      }
  double norm2 = 0.0;
  for (double v : model.weights) norm2 += v * v;
  return 0.5 * lambda * norm2 + (pairs ? hinge_sum / static_cast<double>(pairs) : 0.0);
}

/// Fraction of valid pairs ranked strictly correctly.
inline double pairwise_accuracy(const std::vector<LabeledExample>& examples,
                                const RankingModel& model) {
  detail::PairPool pool = detail::build_pair_pool(examples);
  int64_t correct = 0, pairs = 0;
  for (size_t q = 0; q < pool.query_ids.size(); ++q)
    for (size_t pi : pool.positives[q])
      for (size_t ni : pool.negatives[q]) {
        if (score(model, examples[pi].features) > score(model, examples[ni].features))
          ++correct;
        ++pairs;
      }
  return pairs ? static_cast<double>(correct) / static_cast<double>(pairs) : 0.0;
}

struct RankCandidate {
  std::string tweet_id;
  Timestamp timestamp = 0;
  FeatureVector features;
};

/// Descending by score; ties newest-first, then id ascending.
inline std::vector<std::string> rank_tweets(const RankingModel& model, const Query& query,
                                            std::vector<RankCandidate> candidates) {
  (void)query;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const RankCandidate& a, const RankCandidate& b) {
                     double sa = score(model, a.features), sb = score(model, b.features);
                     if (sa != sb) return sa > sb;
                     if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
                     return a.tweet_id < b.tweet_id;
                   });
  std::vector<std::string> ids;
  ids.reserve(candidates.size());
  for (const RankCandidate& c : candidates) ids.push_back(c.tweet_id);
  return ids;
}

// ---------------------------------------------------------------------------
// model files: header lines then one `feature_name weight` line per feature

inline std::string write_model(const RankingModel& model) {
  std::string out;
  std::vector<std::string> active;
  for (int k = 0; k < kNumFeatures; ++k)
    if (model.mask[static_cast<size_t>(k)]) active.push_back(feature_name(k));
  out += "mask " + join(active, ",") + "\n";
  out += "lambda " + format_double(model.lambda) + "\n";
  out += "steps " + std::to_string(model.steps) + "\n";
  out += "seed " + std::to_string(model.seed) + "\n";
  out += "context " + model.trained_context + "\n";
  for (int k = 0; k < kNumFeatures; ++k)
    out += std::string(feature_name(k)) + " " +
           format_double(model.weights[static_cast<size_t>(k)]) + "\n";
  return out;
}

inline RankingModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  RankingModel model;
  model.mask = {};
  std::map<std::string, int> feature_ids;
  for (int k = 0; k < kNumFeatures; ++k) feature_ids[feature_name(k)] = k;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    size_t sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string val = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
    if (key == "mask") {
      for (const std::string& name : split(val, ',')) {
        auto it = feature_ids.find(trim(name));
        if (it == feature_ids.end())
          throw IoError(path + ":" + std::to_string(lineno) + ": unknown feature '" + name + "'");
        model.mask[static_cast<size_t>(it->second)] = true;
      }
    } else if (key == "lambda") {
      model.lambda = std::stod(val);
    } else if (key == "steps") {
      model.steps = std::stoll(val);
    } else if (key == "seed") {
      model.seed = std::stoull(val);
    } else if (key == "context") {
      model.trained_context = val;
    } else if (feature_ids.count(key)) {
      model.weights[static_cast<size_t>(feature_ids[key])] = std::stod(val);
    } else {
      throw IoError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return model;
}

}  // namespace epint

#endif  // EPINT_RANK_HPP
