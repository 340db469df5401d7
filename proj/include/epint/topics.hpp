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

#ifndef EPINT_TOPICS_HPP
#define EPINT_TOPICS_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "epint/index.hpp"
#include "epint/rng.hpp"

namespace epint {

struct LdaParams {
  int n_topics = 4;
  double alpha = 0.0;  // <= 0 selects 50/K
  double beta = 0.01;
  int iterations = 1000;
  uint64_t seed = 0;
  // Fraction of the most frequent vocabulary removed before fitting, so
  // flood words do not dominate every topic.
  double stop_fraction = 0.005;
};

struct TopicModel {
  int n_topics = 0;
  std::vector<std::string> vocabulary;          // sorted
  std::vector<std::vector<double>> topic_word;  // K x V, rows sum to 1
  std::vector<std::vector<double>> doc_topic;   // D x K, rows sum to 1
  double alpha = 0.0;
  double beta = 0.0;
  uint64_t seed = 0;
  bool k_exceeds_vocab = false;
};

/// Collapsed Gibbs sampler. Each sweep samples every document against a
/// snapshot of the sweep-start topic-word counts, with per-document RNG
/// streams keyed on (seed, tweet_id, sweep); count deltas merge
/// additively at sweep end. Fits are therefore deterministic for a fixed
/// seed and invariant to document order (up to doc_topic row order).
inline TopicModel fit_lda(const std::vector<TokenizedTweet>& tweets, const LdaParams& params) {
  if (tweets.empty()) throw Error("fit_lda: empty corpus");
  if (params.n_topics < 1) throw ConfigError("fit_lda: n_topics must be >= 1");
  if (params.iterations < 1) throw ConfigError("fit_lda: iterations must be >= 1");
  if (params.beta <= 0.0) throw ConfigError("fit_lda: beta must be > 0");

  // Vocabulary with the top stop_fraction most frequent tokens removed.
  std::map<std::string, int64_t> freq;
  for (const auto& tw : tweets)
    for (const auto& tok : tw.tokens) ++freq[tok];
  std::vector<std::pair<std::string, int64_t>> by_freq(freq.begin(), freq.end());
  std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  size_t n_stop = static_cast<size_t>(params.stop_fraction * static_cast<double>(by_freq.size()));
  std::vector<std::string> vocab;
  for (size_t i = n_stop; i < by_freq.size(); ++i) vocab.push_back(by_freq[i].first);
  std::sort(vocab.begin(), vocab.end());
  if (vocab.empty()) throw Error("fit_lda: empty vocabulary after stop-token removal");

  std::unordered_map<std::string, int> word_id;
  for (size_t i = 0; i < vocab.size(); ++i) word_id[vocab[i]] = static_cast<int>(i);

  const int K = params.n_topics;
  const int V = static_cast<int>(vocab.size());
  const double alpha = params.alpha > 0.0 ? params.alpha : 50.0 / K;
  const double beta = params.beta;
  const size_t D = tweets.size();

  // Documents as word-id sequences; stop tokens dropped.
  std::vector<std::vector<int>> words(D);
  std::vector<uint64_t> doc_key(D);
  for (size_t d = 0; d < D; ++d) {
    doc_key[d] = fnv1a64(tweets[d].tweet_id);
    for (const auto& tok : tweets[d].tokens) {
      auto it = word_id.find(tok);
      if (it != word_id.end()) words[d].push_back(it->second);
    }
  }

  std::vector<std::vector<int>> z(D);           // token topic assignments
  std::vector<std::vector<int>> n_dk(D, std::vector<int>(K, 0));
  std::vector<int64_t> n_kw(static_cast<size_t>(K) * V, 0);
  std::vector<int64_t> n_k(K, 0);

  for (size_t d = 0; d < D; ++d) {
    Rng rng = Rng::derive(params.seed, doc_key[d], 0);
    z[d].resize(words[d].size());
    for (size_t i = 0; i < words[d].size(); ++i) {
      int k = static_cast<int>(rng.uniform(static_cast<uint64_t>(K)));
      z[d][i] = k;
      ++n_dk[d][k];
      ++n_kw[static_cast<size_t>(k) * V + words[d][i]];
      ++n_k[k];
    }
  }

  std::vector<int64_t> snap_kw, delta_kw(static_cast<size_t>(K) * V, 0);
  std::vector<int64_t> snap_k, delta_k(K, 0);
  std::vector<double> probs(K);
  std::vector<int64_t> own_k(K, 0);

  for (int iter = 1; iter <= params.iterations; ++iter) {
    snap_kw = n_kw;
    snap_k = n_k;
    std::fill(delta_kw.begin(), delta_kw.end(), 0);
    std::fill(delta_k.begin(), delta_k.end(), 0);

    for (size_t d = 0; d < D; ++d) {
      if (words[d].empty()) continue;
      Rng rng = Rng::derive(params.seed, doc_key[d], static_cast<uint64_t>(iter));
      // Sparse view of this document's in-sweep changes to the globals.
      std::unordered_map<int64_t, int64_t> own_kw;
      std::fill(own_k.begin(), own_k.end(), 0);

      for (size_t i = 0; i < words[d].size(); ++i) {
        const int w = words[d][i];
        const int old_k = z[d][i];
        --n_dk[d][old_k];
        --own_kw[static_cast<int64_t>(old_k) * V + w];
        --own_k[old_k];

        double total = 0.0;
        for (int k = 0; k < K; ++k) {
          int64_t kw = snap_kw[static_cast<size_t>(k) * V + w];
          auto it = own_kw.find(static_cast<int64_t>(k) * V + w);
          if (it != own_kw.end()) kw += it->second;
          const double p = (n_dk[d][k] + alpha) * (static_cast<double>(kw) + beta) /
                           (static_cast<double>(snap_k[k] + own_k[k]) + V * beta);
          probs[k] = p;
          total += p;
        }
        double u = rng.uniform01() * total;
        int new_k = 0;
        for (; new_k < K - 1; ++new_k) {
          u -= probs[new_k];
          if (u <= 0.0) break;
        }

        z[d][i] = new_k;
        ++n_dk[d][new_k];
        ++own_kw[static_cast<int64_t>(new_k) * V + w];
        ++own_k[new_k];
      }

      for (const auto& [key, v] : own_kw) delta_kw[static_cast<size_t>(key)] += v;
      for (int k = 0; k < K; ++k) delta_k[k] += own_k[k];
    }

    for (size_t i = 0; i < n_kw.size(); ++i) n_kw[i] += delta_kw[i];
    for (int k = 0; k < K; ++k) n_k[k] += delta_k[k];
  }

  TopicModel model;
  model.n_topics = K;
  model.vocabulary = vocab;
  model.alpha = alpha;
  model.beta = beta;
  model.seed = params.seed;
  model.k_exceeds_vocab = K > V;
  model.topic_word.assign(static_cast<size_t>(K), std::vector<double>(V));
  for (int k = 0; k < K; ++k)
    for (int w = 0; w < V; ++w)
      model.topic_word[k][w] = (static_cast<double>(n_kw[static_cast<size_t>(k) * V + w]) + beta) /
                               (static_cast<double>(n_k[k]) + V * beta);
  model.doc_topic.assign(D, std::vector<double>(K));
  for (size_t d = 0; d < D; ++d) {
    const double len = static_cast<double>(words[d].size());
    for (int k = 0; k < K; ++k)
      model.doc_topic[d][k] = (n_dk[d][k] + alpha) / (len + K * alpha);
  }
  return model;
}

/// The n highest-probability terms of one topic, descending, ties broken
/// lexicographically.
inline std::vector<std::pair<std::string, double>> top_terms(const TopicModel& model,
                                                             int topic, size_t n) {
  if (topic < 0 || topic >= model.n_topics)
    throw Error("top_terms: topic " + std::to_string(topic) + " out of range (K=" +
                std::to_string(model.n_topics) + ")");
  std::vector<std::pair<std::string, double>> terms;
  terms.reserve(model.vocabulary.size());
  for (size_t w = 0; w < model.vocabulary.size(); ++w)
    terms.emplace_back(model.vocabulary[w], model.topic_word[static_cast<size_t>(topic)][w]);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (terms.size() > n) terms.resize(n);
  return terms;
}

/// Text dump: one block per topic, top-20 `term probability` lines.
inline std::string write_topics(const TopicModel& model) {
  std::string out;
  for (int k = 0; k < model.n_topics; ++k) {
    out += "topic " + std::to_string(k) + "\n";
    for (const auto& [term, prob] : top_terms(model, k, 20)) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", prob);
      out += term + " " + buf + "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace epint

#endif  // EPINT_TOPICS_HPP
