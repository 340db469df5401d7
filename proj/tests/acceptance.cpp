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

// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "epint/pipeline.hpp"
#include "support/oracles.hpp"

using namespace epint;

namespace {

int g_failures = 0;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

void criterion(const std::string& name, const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  try {
    body();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("[PASS] %s (%lld ms)\n", name.c_str(), static_cast<long long>(ms));
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("[FAIL] %s: %s\n", name.c_str(), e.what());
  }
  std::fflush(stdout);
}

std::string data_path(const std::string& name) {
  return std::string(EPINT_DATA_DIR) + "/" + name;
}

// 100 random series, every method, incremental vs naive recompute <= 1e-9.
void detector_oracle_equivalence() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(20110520);
  const std::vector<Method> methods = {Method::C1, Method::C2, Method::C3,
                                       Method::F_STAT, Method::EWMA};
  for (int trial = 0; trial < 100; ++trial) {
    DailySeries series;
    series.term = "x";
    series.start_day = parse_date("2011-05-01");
    series.counts.resize(60);
    for (int& c : series.counts) c = static_cast<int>(rng.uniform(21));
    for (Method m : methods) {
      DetectorParams p = DetectorParams::defaults(m);
      AlarmReport report = run_detector(series, p);
      oracles::NaiveStats naive = oracles::naive_detector(series.counts, p);
      for (size_t t = 0; t < series.counts.size(); ++t) {
        require(report.days[t].statistic.has_value() == naive.statistic[t].has_value(),
                "warm-up mismatch");
        if (!report.days[t].statistic) continue;
        double got = *report.days[t].statistic, want = *naive.statistic[t];
        if (std::isinf(want)) {
          require(std::isinf(got), "expected infinite sentinel");
        } else {
          require(std::abs(got - want) <= 1e-9,
                  std::string(method_name(m)) + " differs from oracle by " +
                      format_double(std::abs(got - want)));
        }
      }
    }
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  require(elapsed < 5000, "runtime " + std::to_string(elapsed) + " ms exceeds 5 s");
}

// Bundled fixture: near-zero days, spike on day 21; all five detectors
// alarm on day 21 and never earlier.
void sudden_outbreak_alarm() {
  auto tweets = load_corpus(data_path("corpus.jsonl"));
  auto index = build_index(tweets);
  DateInterval range{parse_date("2011-05-01"), parse_date("2011-06-29")};
  DailySeries series = aggregate_daily_counts(index, "ehec", range);
  require(series.counts.size() == 60, "fixture range should cover 60 days");
  for (int d = 0; d < 20; ++d)
    require(series.counts[static_cast<size_t>(d)] <= 2,
            "day " + std::to_string(d + 1) + " not near-zero");
  require(series.counts[20] >= 5, "spike day count below 5");

  const Day spike = parse_date("2011-05-21");
  for (Method m : {Method::C1, Method::C2, Method::C3, Method::F_STAT, Method::EWMA}) {
    AlarmReport report = run_detector(series, DetectorParams::defaults(m));
    require(report.first_alarm_date.has_value(),
            std::string(method_name(m)) + " never alarmed");
    require(*report.first_alarm_date == spike,
            std::string(method_name(m)) + " first alarm on " +
                format_date(*report.first_alarm_date) + ", want " + format_date(spike));
    for (const AlarmDay& day : report.days)
      require(!(day.alarm && day.date < spike),
              std::string(method_name(m)) + " alarmed before the spike");
  }
}

// r = 0.8 on the 4-point example to 1e-12; bundled curve pair r >= 0.85.
void correlation_check() {
  double r = pearson_correlation({1, 2, 3, 4}, {1, 3, 2, 4});
  require(std::abs(r - 0.8) <= 1e-12, "hand example r = " + format_double(r));

  auto curve = load_curve_csv(data_path("curves.csv"));
  require(curve.size() >= 30, "curve fixture too short");
  std::vector<double> cases, tweets;
  for (const CurvePoint& p : curve) {
    cases.push_back(p.cases);
    tweets.push_back(p.tweets);
  }
  double rc = pearson_correlation(cases, tweets);
  require(rc >= 0.85, "curve fixture r = " + format_double(rc) + " < 0.85");
}

// P@n, AP, MAP, NDCG match brute-force forms on 1,000 random lists.
void metric_oracle_equivalence() {
  Rng rng(424242);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t len = 1 + rng.uniform(12);
    RankedList list;
    list.query_id = "q";
    list.ratings.resize(len);
    int relevant = 0;
    for (int& r : list.ratings) {
      r = static_cast<int>(rng.uniform(2));
      relevant += r;
    }
    for (size_t i = 0; i < len; ++i) list.items.push_back("t" + std::to_string(i));
    list.total_relevant = relevant;
    size_t n = 1 + rng.uniform(14);

    require(std::abs(precision_at_n(list, n) -
                     oracles::brute_precision_at_n(list.ratings, n)) <= 1e-12,
            "P@n differs from oracle");
    if (relevant > 0) {
      require(std::abs(average_precision(list) -
                       oracles::brute_average_precision(list.ratings, relevant)) <= 1e-12,
              "AP differs from oracle");
      require(std::abs(mean_average_precision({list}) - average_precision(list)) <= 1e-12,
              "single-query MAP differs from AP");
      require(std::abs(ndcg_at_n(list, n) -
                       oracles::brute_ndcg_at_n(list.ratings, n, std::exp(1.0))) <= 1e-12,
              "NDCG differs from oracle");
      // perfect list scores exactly 1
      RankedList perfect = list;
      std::sort(perfect.ratings.begin(), perfect.ratings.end(), std::greater<int>());
      require(ndcg_at_n(perfect, n) == 1.0, "perfect list NDCG != 1.0");
    }
  }
}

// 200-doc two-cluster corpus, K=2, 500 iterations: purity >= 0.9 and all
// rows normalized, in under 30 s.
void lda_sanity() {
  auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> vocab_a = {"fever", "cough", "pain",  "clinic", "ward",
                                            "nurse", "dose",  "chart", "fluid",  "rash"};
  const std::vector<std::string> vocab_b = {"goal",  "match", "score", "league", "coach",
                                            "title", "derby", "kick",  "corner", "pitch"};
  Rng rng(8);
  std::vector<TokenizedTweet> docs;
  std::vector<int> cluster;
  for (int i = 0; i < 200; ++i) {
    int c = i % 2;
    TokenizedTweet t;
    t.tweet_id = "d" + std::to_string(i);
    const auto& vocab = c == 0 ? vocab_a : vocab_b;
    int len = 8 + static_cast<int>(rng.uniform(8));
    for (int w = 0; w < len; ++w)
      t.tokens.push_back(vocab[static_cast<size_t>(rng.uniform(vocab.size()))]);
    docs.push_back(std::move(t));
    cluster.push_back(c);
  }

  LdaParams params;
  params.n_topics = 2;
  params.iterations = 500;
  params.seed = 2011;
  TopicModel model = fit_lda(docs, params);

  for (const auto& row : model.topic_word) {
    double sum = 0.0;
    for (double p : row) sum += p;
    require(std::abs(sum - 1.0) <= 1e-9, "topic_word row not normalized");
  }
  for (const auto& row : model.doc_topic) {
    double sum = 0.0;
    for (double p : row) sum += p;
    require(std::abs(sum - 1.0) <= 1e-9, "doc_topic row not normalized");
  }

  int agree = 0;
  for (size_t d = 0; d < docs.size(); ++d) {
    int best = model.doc_topic[d][0] >= model.doc_topic[d][1] ? 0 : 1;
    agree += best == cluster[d] ? 1 : 0;
  }
  double purity = std::max(agree, static_cast<int>(docs.size()) - agree) /
                  static_cast<double>(docs.size());
  require(purity >= 0.9, "topic purity " + format_double(purity) + " < 0.9");

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  require(elapsed < 30000, "runtime " + std::to_string(elapsed) + " ms exceeds 30 s");
}

// Linearly separable pairwise data: accuracy >= 0.98 within 10k steps and
// decreasing objective, averaged over 5 seeds.
void spd_convergence() {
  Rng rng(606);
  std::vector<LabeledExample> examples;
  for (int i = 0; i < 500; ++i) {
    LabeledExample e;
    e.query_id = "q" + std::to_string(i % 5);
    e.tweet_id = "t" + std::to_string(i);
    e.timestamp = i;
    int label = static_cast<int>(rng.uniform(2));
    // separable: relevant tweets carry the context/url signal
    e.features.values[F_MC] = 1.0;
    e.features.values[F_CC] = label;
    e.features.values[F_URL] = label ? (rng.bernoulli(0.7) ? 1.0 : 0.0) : 0.0;
    e.features.values[F_L] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    e.features.values[F_HASHTAG] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    e.label = label;
    examples.push_back(e);
  }

  double objective_first = 0.0, objective_last = 0.0;
  const double lambda = 1e-3;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    RankingModel one = train_spd(examples, mask_all(), lambda, 1, seed);
    RankingModel trained = train_spd(examples, mask_all(), lambda, 10000, seed);
    objective_first += pairwise_objective(examples, one, lambda);
    objective_last += pairwise_objective(examples, trained, lambda);
    double acc = pairwise_accuracy(examples, trained);
    require(acc >= 0.98,
            "seed " + std::to_string(seed) + " pairwise accuracy " + format_double(acc));
  }
  require(objective_last / 5.0 < objective_first / 5.0,
          "objective did not decrease (first " + format_double(objective_first / 5.0) +
              ", last " + format_double(objective_last / 5.0) + ")");
}

// Planted-signal corpus through index + features + judgments + CV: the
// full feature set must beat condition+location, which must beat
// condition-only, on MAP.
void mask_ordering() {
  Gazetteer mc, loc, cc;
  mc.entity_class = EntityClass::MedicalCondition;
  mc.terms = {"ehec"};
  loc.entity_class = EntityClass::Location;
  loc.terms = {"hamburg", "bremen", "lower_saxony"};
  cc.entity_class = EntityClass::ComplementaryContext;
  cc.terms = {"cucumbers", "sprouts", "salad"};

  SyntheticSpec spec;
  spec.seed = 4242;
  spec.days = 70;
  spec.baseline_rate = 0.3;
  spec.spike_day = 21;
  spec.spike_height = 15;
  spec.relevance_plant_rate = 0.45;
  auto [tweets, judgments] = generate_synthetic_corpus(spec, mc, loc, cc);
  auto index = build_index(tweets);

  std::map<std::string, std::vector<Judgment>> panels;
  for (const Judgment& j : judgments) panels[j.tweet_id].push_back(j);

  Query q;
  q.id = "q0";
  q.terms = {"ehec"};
  q.base = "ehec";
  std::vector<LabeledExample> examples;
  for (const std::string& id : retrieve(index, q, 100000)) {
    const IndexedTweet& doc = index.doc(id);
    LabeledExample e;
    e.query_id = q.id;
    e.tweet_id = id;
    e.timestamp = doc.timestamp;
    e.features = extract_features(q, doc.tok, mc, loc, cc);
    e.label = majority_vote(panels.at(id));
    examples.push_back(std::move(e));
  }
  require(examples.size() >= 60, "expected a substantial candidate pool, got " +
                                     std::to_string(examples.size()));

  CvParams params;
  params.folds = 10;
  params.train_fraction = 0.8;
  params.lambda = 1e-3;
  params.steps = 10000;
  params.seed = 7;
  CvResult result = cross_validate(
      examples, {mask_of({F_MC}), mask_of({F_MC, F_L}), mask_all()}, params);

  auto value = [&](const FeatureMask& m, const char* metric) {
    auto v = result.values.at(mask_name(m)).at(metric);
    require(v.has_value(), std::string(metric) + " missing for " + mask_name(m));
    return *v;
  };
  double map_mc = value(mask_of({F_MC}), "map");
  double map_mcl = value(mask_of({F_MC, F_L}), "map");
  double map_full = value(mask_all(), "map");
  require(map_full > map_mcl && map_mcl > map_mc,
          "MAP ordering violated: full " + format_double(map_full) + ", mc+l " +
              format_double(map_mcl) + ", mc " + format_double(map_mc));
  double p1_full = value(mask_all(), "p@1");
  double p1_mcl = value(mask_of({F_MC, F_L}), "p@1");
  double p1_mc = value(mask_of({F_MC}), "p@1");
  require(p1_full >= p1_mcl && p1_full >= p1_mc,
          "P@1 ordering violated: full " + format_double(p1_full) + ", mc+l " +
              format_double(p1_mcl) + ", mc " + format_double(p1_mc));
}

// Two full pipeline runs over the bundled config give byte-identical
// manifests.
void pipeline_determinism() {
  PipelineConfig cfg = load_pipeline_config(data_path("pipeline.conf"));
  namespace fs = std::filesystem;
  fs::path scratch = fs::temp_directory_path() / "epint_acceptance";
  fs::remove_all(scratch);

  auto manifest_of = [&](const std::string& out) {
    cfg.out_dir = (scratch / out).string();
    run_pipeline(cfg, Stage::All);
    std::ifstream in(cfg.out_dir + "/manifest.txt", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string first = manifest_of("run1");
  std::string second = manifest_of("run2");
  require(!first.empty(), "manifest missing");
  require(first == second, "manifests differ between identical runs");
}

}  // namespace

int main() {
  criterion("detector-oracle-equivalence", detector_oracle_equivalence);
  criterion("sudden-outbreak-alarm", sudden_outbreak_alarm);
  criterion("correlation-check", correlation_check);
  criterion("metric-oracle-equivalence", metric_oracle_equivalence);
  criterion("lda-sanity", lda_sanity);
  criterion("spd-convergence", spd_convergence);
  criterion("mask-ordering", mask_ordering);
  criterion("pipeline-determinism", pipeline_determinism);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
