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

#ifndef EPINT_SYNTHETIC_HPP
#define EPINT_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "epint/corpus.hpp"
#include "epint/eval.hpp"
#include "epint/rng.hpp"

namespace epint {

/// Parameters of the synthetic outbreak corpus. Stands in for the real
/// (unavailable) message stream: quiet background days, then a sudden
/// spike that decays over roughly a week.
struct SyntheticSpec {
  uint64_t seed = 42;
  int days = 60;
  double baseline_rate = 0.1;  // mean condition-mentioning tweets per background day
  int spike_day = 21;          // 1-based
  int spike_height = 5;        // condition-mentioning tweets on the spike day
  double relevance_plant_rate = 0.5;
};

namespace detail {

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "today",  "really", "news",    "about",  "people", "again",  "just",
      "think",  "watch",  "morning", "coffee", "train",  "home",   "work",
      "game",   "music",  "movie",   "rain",   "sunny",  "happy",  "tired",
      "lunch",  "dinner", "friend",  "buy",    "read",   "write",  "street",
      "market", "garden", "weekend", "travel", "photo",  "laugh",  "story",
      "phone",  "study",  "cook",    "bike",   "sleep"};
  return words;
}

inline std::string pick(Rng& rng, const std::vector<std::string>& words) {
  return words[static_cast<size_t>(rng.uniform(words.size()))];
}

inline std::string random_id(Rng& rng, std::unordered_set<std::string>& used) {
  for (;;) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%010llx",
                  static_cast<unsigned long long>(rng.next_u64() & 0xffffffffffull));
    if (used.insert(buf).second) return buf;
  }
}

}  // namespace detail

/// Deterministic synthetic corpus plus per-tweet relevance judgments.
///
/// Background days draw ~Poisson(baseline_rate) tweets mentioning the
/// primary condition; from spike_day the outbreak adds spike_height
/// tweets, decaying geometrically afterwards. A relevance_plant_rate
/// fraction of outbreak tweets carries a complementary-context term, a
/// hashtag and a URL, and is judged relevant; everything else is judged
/// not-relevant. Judgments carry the primary condition as query id and a
/// single "synthetic" annotator.
inline std::pair<std::vector<Tweet>, std::vector<Judgment>> generate_synthetic_corpus(
    const SyntheticSpec& spec, const Gazetteer& mc, const Gazetteer& loc,
    const Gazetteer& cc) {
  if (spec.days < 25)
    throw ConfigError("synthetic corpus: days must be >= 25 (detector warm-up is 20)");
  if (spec.relevance_plant_rate < 0.0 || spec.relevance_plant_rate > 1.0)
    throw ConfigError("synthetic corpus: relevance_plant_rate must be in [0,1]");
  if (spec.spike_day < 1 || spec.spike_day > spec.days)
    throw ConfigError("synthetic corpus: spike_day must be in [1, days]");
  if (mc.terms.empty() || loc.terms.empty())
    throw ConfigError("synthetic corpus: medical-condition and location gazetteers "
                      "must be nonempty");

  const Day start = parse_date("2011-05-01");
  const std::string condition = *mc.terms.begin();
  const std::vector<std::string> locations(loc.terms.begin(), loc.terms.end());
  std::vector<std::string> cc_terms(cc.terms.begin(), cc.terms.end());
  if (cc_terms.empty()) cc_terms.push_back("unspecified");
  const auto& fillers = detail::filler_words();

  Rng rng(spec.seed);
  std::unordered_set<std::string> used_ids;
  std::vector<std::pair<Tweet, int>> drafts;  // tweet, label (-1 = chatter)

  auto make_tweet = [&](Day day, const std::string& text) {
    Tweet t;
    t.id = detail::random_id(rng, used_ids);
    t.timestamp = static_cast<Timestamp>(day) * 86400 + static_cast<Timestamp>(rng.uniform(86400));
    t.user = "u" + std::to_string(1 + rng.uniform(30));
    t.text = text;
    return t;
  };

  for (int d = 0; d < spec.days; ++d) {
    const Day day = start + d;
    const int day1 = d + 1;

    // ambient chatter so every day has traffic
    int n_chatter = 2 + rng.poisson(2.0);
    for (int i = 0; i < n_chatter; ++i) {
      std::string text = detail::pick(rng, fillers);
      int len = 4 + static_cast<int>(rng.uniform(5));
      for (int w = 0; w < len; ++w) text += " " + detail::pick(rng, fillers);
      drafts.push_back({make_tweet(day, text), -1});
    }

    // background mentions of the condition
    int n_background = rng.poisson(spec.baseline_rate);
    for (int i = 0; i < n_background; ++i) {
      std::string text = detail::pick(rng, fillers) + " " + detail::pick(rng, fillers) +
                         " " + condition + " " + detail::pick(rng, fillers);
      drafts.push_back({make_tweet(day, text), 0});
    }

    // outbreak wave: full height on the spike day, then decay
    if (day1 >= spec.spike_day) {
      int extra = static_cast<int>(std::lround(
          spec.spike_height * std::exp(-(day1 - spec.spike_day) / 7.0)));
      if (day1 == spec.spike_day) extra = spec.spike_height;
      for (int i = 0; i < extra; ++i) {
        bool relevant = rng.bernoulli(spec.relevance_plant_rate);
        std::string text;
        if (relevant) {
          const std::string& cc_term = cc_terms[rng.uniform(cc_terms.size())];
          text = condition + " cases rising " + detail::pick(rng, fillers);
          if (rng.bernoulli(0.8))
            text += " in " + locations[rng.uniform(locations.size())];
          text += " " + cc_term + " suspected #" +
                  (rng.bernoulli(0.5) ? condition : cc_term);
          char ub[16];
          std::snprintf(ub, sizeof(ub), "%06llx",
                        static_cast<unsigned long long>(rng.next_u64() & 0xffffff));
          text += " https://sho.rt/" + std::string(ub);
        } else {
          text = detail::pick(rng, fillers) + " " + condition + " " +
                 detail::pick(rng, fillers) + " " + detail::pick(rng, fillers);
          if (rng.bernoulli(0.25))
            text += " " + locations[rng.uniform(locations.size())];
          if (rng.bernoulli(0.1)) text += " #" + detail::pick(rng, fillers);
          if (rng.bernoulli(0.1)) {
            char ub[16];
            std::snprintf(ub, sizeof(ub), "%06llx",
                          static_cast<unsigned long long>(rng.next_u64() & 0xffffff));
            text += " https://sho.rt/" + std::string(ub);
          }
        }
        drafts.push_back({make_tweet(day, text), relevant ? 1 : 0});
      }
    }
  }

  std::sort(drafts.begin(), drafts.end(), [](const auto& a, const auto& b) {
    if (a.first.timestamp != b.first.timestamp) return a.first.timestamp < b.first.timestamp;
    return a.first.id < b.first.id;
  });

  std::vector<Tweet> tweets;
  std::vector<Judgment> judgments;
  tweets.reserve(drafts.size());
  for (auto& [tweet, label] : drafts) {
    judgments.push_back({condition, tweet.id, "synthetic", label > 0 ? 1 : 0});
    tweets.push_back(std::move(tweet));
  }
  return {std::move(tweets), std::move(judgments)};
}

/// Day-aligned case curve and tweet-volume curve with the crowd's
/// inertia tail on the tweet side; correlates strongly but not perfectly.
inline std::string generate_curve_fixture(int days = 61) {
  const Day start = parse_date("2011-05-01");
  std::string out = "date,cases,tweets\n";
  for (int d = 0; d < days; ++d) {
    double cases = 100.0 * std::exp(-(d - 30.0) * (d - 30.0) / 72.0);
    double tweets = 120.0 * std::exp(-(d - 30.0) * (d - 30.0) / 95.0);
    if (d > 30) tweets += 18.0 * std::exp(-(d - 30.0) / 9.0);  // inertia
    tweets += 2.5 * std::sin(0.7 * d);
    if (tweets < 0) tweets = 0;
    out += format_date(start + d) + "," + format_double(std::round(cases * 100) / 100) +
           "," + format_double(std::round(tweets * 100) / 100) + "\n";
  }
  return out;
}

/// Reads `date,<value>[,<value>]` CSV with a header line.
struct CurvePoint {
  Day day = 0;
  double cases = 0.0;
  double tweets = 0.0;
};

inline std::vector<CurvePoint> load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curve file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty curve file");
  std::vector<CurvePoint> out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() < 2)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected date,value[,value]");
    CurvePoint p;
    p.day = parse_date(trim(fields[0]));
    try {
      p.cases = std::stod(fields[1]);
      p.tweets = fields.size() > 2 ? std::stod(fields[2]) : 0.0;
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": non-numeric value");
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace epint

#endif  // EPINT_SYNTHETIC_HPP
