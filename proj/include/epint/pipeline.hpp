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

#ifndef EPINT_PIPELINE_HPP
#define EPINT_PIPELINE_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "epint/config.hpp"
#include "epint/synthetic.hpp"

namespace epint {

enum class Stage { Detect, Expand, Rank, Eval, All };

inline Stage parse_stage(const std::string& s) {
  if (s == "detect") return Stage::Detect;
  if (s == "expand") return Stage::Expand;
  if (s == "rank") return Stage::Rank;
  if (s == "eval") return Stage::Eval;
  if (s == "all") return Stage::All;
  throw ConfigError("unknown stage '" + s + "'");
}

namespace detail {

/// Atomic artifact writes (temp file + rename) with checksum tracking;
/// on failure everything written so far is removed.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path path = fs::path(dir_) / name;
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw IoError("cannot write artifact '" + path.string() + "'");
      out << content;
      if (!out.flush()) throw IoError("write failed on '" + path.string() + "'");
    }
    fs::rename(tmp, path);
    checksums_[name] = fnv1a64(content);
    written_.push_back(path.string());
  }

  void remove_all() {
    for (const std::string& p : written_) std::filesystem::remove(p);
    written_.clear();
    checksums_.clear();
  }

  const std::map<std::string, uint64_t>& checksums() const { return checksums_; }

 private:
  std::string dir_;
  std::map<std::string, uint64_t> checksums_;
  std::vector<std::string> written_;
};

inline std::string hex64(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline void require_file(const std::string& key, const std::string& path) {
  if (path.empty()) throw ConfigError("config field '" + key + "' is required for this stage");
  if (!std::filesystem::exists(path))
    throw ConfigError("config field '" + key + "': path '" + path + "' does not exist");
}

}  // namespace detail

/// Checks field presence and path existence for the stages about to run.
/// The detect stage deliberately never touches gazetteers or judgments.
inline void validate_config(const PipelineConfig& cfg, Stage stage) {
  if (!cfg.seed) throw ConfigError("config field 'seed' must be set explicitly");
  if (cfg.out_dir.empty()) throw ConfigError("config field 'out' is required");
  detail::require_file("corpus.path", cfg.corpus_path);

  const bool detect = stage == Stage::Detect || stage == Stage::All;
  const bool expand = stage == Stage::Expand || stage == Stage::Rank ||
                      stage == Stage::Eval || stage == Stage::All;
  const bool rank = stage == Stage::Rank || stage == Stage::Eval || stage == Stage::All;

  if (detect) {
    if (cfg.detect_terms.empty()) throw ConfigError("config field 'detect.terms' is required");
    if (cfg.detect_range.length() < 1)
      throw ConfigError("config field 'detect.range' is required");
    if (cfg.methods.empty()) throw ConfigError("config field 'detect.methods' is required");
    if (!cfg.cases_csv.empty()) detail::require_file("detect.cases_csv", cfg.cases_csv);
  }
  if (expand) {
    detail::require_file("corpus.gazetteer_mc", cfg.gaz_mc_path);
    detail::require_file("corpus.gazetteer_loc", cfg.gaz_loc_path);
    detail::require_file("corpus.gazetteer_cc", cfg.gaz_cc_path);
    if (cfg.context.interval.length() < 1)
      throw ConfigError("config field 'context.interval' is required");
    if (cfg.context.medical_conditions.empty())
      throw ConfigError("config field 'context.medical_conditions' is required");
  }
  if (rank) detail::require_file("corpus.judgments", cfg.judgments_path);
}

/// Runs the requested stage and everything it depends on, writes the
/// artifacts, and finishes with a manifest of (config hash, seed,
/// artifact checksums). Throws on failure after removing partial output.
inline void run_pipeline(const PipelineConfig& cfg, Stage stage) {
  validate_config(cfg, stage);
  detail::ArtifactWriter writer(cfg.out_dir);

  const bool do_detect = stage == Stage::Detect || stage == Stage::All;
  const bool do_expand = stage == Stage::Expand || stage == Stage::Rank ||
                         stage == Stage::Eval || stage == Stage::All;
  const bool do_rank = stage == Stage::Rank || stage == Stage::Eval || stage == Stage::All;
  const bool do_eval = stage == Stage::Eval || stage == Stage::All;

  try {
    const std::vector<Tweet> tweets = load_corpus(cfg.corpus_path);
    const InvertedIndex index = build_index(tweets);
    const uint64_t seed = *cfg.seed;

    if (do_detect) {
      std::map<Day, double> cases;
      if (!cfg.cases_csv.empty())
        for (const CurvePoint& p : load_curve_csv(cfg.cases_csv)) cases[p.day] = p.cases;

      std::string summary = "term,method,first_alarm_date,n_alarm_days\n";
      std::string correlation = "term,pearson_r\n";
      for (const std::string& term : cfg.detect_terms) {
        DailySeries series = aggregate_daily_counts(index, term, cfg.detect_range);
        for (Method m : cfg.methods) {
          AlarmReport report = run_detector(series, cfg.detector_params(m));
          std::string base = "detect_" + term + "_" + method_name(m);
          writer.write(base + ".csv", write_series_csv(report));
          summary += alarm_summary_line(report) + "\n";
          if (!cases.empty()) {
            std::string plot = "date,cases,tweets,statistic,alarm\n";
            for (const AlarmDay& d : report.days) {
              plot += format_date(d.date) + ",";
              auto it = cases.find(d.date);
              if (it != cases.end()) plot += format_double(it->second);
              plot += "," + std::to_string(d.count) + ",";
              if (d.statistic) plot += format_double(*d.statistic);
              plot += ",";
              plot += d.alarm ? '1' : '0';
              plot += '\n';
            }
            writer.write("plot_" + term + "_" + method_name(m) + ".csv", plot);
          }
        }
        if (!cases.empty()) {
          std::vector<double> xs, ys;
          for (size_t i = 0; i < series.counts.size(); ++i) {
            auto it = cases.find(series.start_day + static_cast<Day>(i));
            if (it == cases.end()) continue;
            xs.push_back(it->second);
            ys.push_back(static_cast<double>(series.counts[i]));
          }
          correlation += term + "," + format_double(pearson_correlation(xs, ys)) + "\n";
        }
      }
      writer.write("alarm_summary.csv", summary);
      if (!cfg.cases_csv.empty()) writer.write("correlation.csv", correlation);
    }

    std::vector<Query> queries;
    Gazetteer gaz_mc, gaz_loc, gaz_cc;
    if (do_expand) {
      gaz_mc = load_gazetteer(cfg.gaz_mc_path, EntityClass::MedicalCondition);
      gaz_loc = load_gazetteer(cfg.gaz_loc_path, EntityClass::Location);
      gaz_cc = load_gazetteer(cfg.gaz_cc_path, EntityClass::ComplementaryContext);
      check_gazetteers_disjoint(gaz_mc, gaz_loc, gaz_cc);
      cfg.context.validate();

      std::vector<TokenizedTweet> docs;
      for (const IndexedTweet& doc : index.docs)
        if (cfg.context.interval.contains(doc.day)) docs.push_back(doc.tok);

      LdaParams lda = cfg.lda;
      lda.seed = seed;
      TopicModel model = fit_lda(docs, lda);
      writer.write("topics.txt", write_topics(model));

      auto cotags = cooccurring_hashtags(index, cfg.context);
      auto expansion =
          expand_context(cfg.context, model, cotags, gaz_mc, gaz_loc, gaz_cc, cfg.expansion);
      writer.write("expansion.tsv", write_expansion_report(expansion));

      queries = build_queries(cfg.context, expansion, cfg.query_opts);
      std::string qdump = "id\tbase\tterms\n";
      for (const Query& q : queries)
        qdump += q.id + "\t" + q.base + "\t" +
                 join({q.terms.begin(), q.terms.end()}, " ") + "\n";
      writer.write("queries.tsv", qdump);
    }

    std::vector<LabeledExample> examples;
    if (do_rank) {
      std::vector<Judgment> judgments = load_judgments(cfg.judgments_path);
      // Panels keyed by (base condition, tweet): synthetic judgment files
      // carry the base condition as query id.
      std::map<std::pair<std::string, std::string>, std::vector<Judgment>> panels;
      for (const Judgment& j : judgments) panels[{j.query_id, j.tweet_id}].push_back(j);

      std::string edump = "query_id,tweet_id,ts,f_mc,f_l,f_hashtag,f_cc,f_url,label\n";
      for (const Query& q : queries) {
        for (const std::string& id : retrieve(index, q, cfg.retrieve_limit)) {
          auto panel = panels.find({q.base, id});
          if (panel == panels.end()) continue;  // unjudged tweet
          const IndexedTweet& doc = index.doc(id);
          LabeledExample e;
          e.query_id = q.id;
          e.tweet_id = id;
          e.timestamp = doc.timestamp;
          e.features = extract_features(q, doc.tok, gaz_mc, gaz_loc, gaz_cc);
          e.label = majority_vote(panel->second);
          edump += e.query_id + "," + e.tweet_id + "," + format_timestamp(e.timestamp);
          for (double v : e.features.values) edump += "," + format_double(v);
          edump += "," + std::to_string(e.label) + "\n";
          examples.push_back(std::move(e));
        }
      }
      writer.write("examples.csv", edump);

      const std::string context_id =
          join({cfg.context.medical_conditions.begin(), cfg.context.medical_conditions.end()},
               "+") +
          "@" + format_date(cfg.context.interval.start) + "/" +
          format_date(cfg.context.interval.end);
      const std::vector<std::pair<std::string, FeatureMask>> trainings = {
          {"model_mc.txt", mask_of({F_MC})},
          {"model_mc_l.txt", mask_of({F_MC, F_L})},
          {"model_full.txt", mask_all()},
      };
      for (const auto& [file, mask] : trainings) {
        RankingModel model = train_spd(examples, mask, cfg.lambda, cfg.steps, seed);
        model.trained_context = context_id;
        writer.write(file, write_model(model));
      }
    }

    if (do_eval) {
      CvParams cv = cfg.cv;
      cv.lambda = cfg.lambda;
      cv.steps = cfg.steps;
      cv.seed = seed;
      CvResult result = cross_validate(
          examples, {mask_of({F_MC}), mask_of({F_MC, F_L}), mask_all()}, cv);
      writer.write("metrics.csv", write_metrics_csv(result));
      std::string table = write_metrics_table(result);
      if (!result.warnings.empty()) {
        table += "\nwarnings:\n";
        for (const std::string& w : result.warnings) table += "  " + w + "\n";
      }
      writer.write("metrics_table.txt", table);
    }

    std::string manifest = "config_hash " + detail::hex64(fnv1a64(canonical_config(cfg))) + "\n";
    manifest += "seed " + std::to_string(seed) + "\n";
    for (const auto& [name, sum] : writer.checksums())
      manifest += "artifact " + name + " " + detail::hex64(sum) + "\n";
    writer.write("manifest.txt", manifest);
  } catch (...) {
    writer.remove_all();
    throw;
  }
}

// ---------------------------------------------------------------------------

/// Writes the bundled demo fixture: synthetic corpus, gazetteers,
/// judgments, case/tweet curves, and a ready-to-run pipeline config.
inline void write_fixture(const std::string& dir, const SyntheticSpec& spec) {
  std::filesystem::create_directories(dir);
  auto path = [&](const std::string& name) { return dir + "/" + name; };

  std::ofstream mc(path("gazetteer_mc.txt")), loc(path("gazetteer_loc.txt")),
      cc(path("gazetteer_cc.txt"));
  mc << "# medical conditions\nehec\nhus\ndiarrhea\npathogen\nbacteria\n"
        "intestinal_infection\n";
  loc << "# locations\nhamburg\nberlin\nbremen\nlower_saxony\nnorthern_germany\n"
         "luebeck\nspain\n";
  cc << "# complementary context\ncucumbers\nsprouts\ntomatoes\nsalad\nvegetables\n"
        "rki\nlettuce\nfarm\n";
  mc.close();
  loc.close();
  cc.close();

  // The generator tracks the lexicographically first condition, so the
  // generation gazetteer pins "ehec" as the outbreak term; the full file
  // above still drives classification.
  Gazetteer g_mc;
  g_mc.entity_class = EntityClass::MedicalCondition;
  g_mc.terms = {"ehec"};
  Gazetteer g_loc = load_gazetteer(path("gazetteer_loc.txt"), EntityClass::Location);
  Gazetteer g_cc = load_gazetteer(path("gazetteer_cc.txt"), EntityClass::ComplementaryContext);
  auto [tweets, judgments] = generate_synthetic_corpus(spec, g_mc, g_loc, g_cc);
  save_corpus(path("corpus.jsonl"), tweets);
  save_judgments(path("judgments.csv"), judgments);

  {
    std::ofstream out(path("curves.csv"), std::ios::binary);
    out << generate_curve_fixture(spec.days + 1);
  }

  const Day start = parse_date("2011-05-01");
  const std::string range =
      format_date(start) + "/" + format_date(start + spec.days - 1);
  const std::string interval =
      format_date(start + spec.spike_day - 1) + "/" + format_date(start + spec.days - 1);
  // Input paths are written bare: they resolve against the config file's
  // own directory at load time.
  std::ofstream conf(path("pipeline.conf"), std::ios::binary);
  conf << "seed = " << spec.seed << "\n"
       << "out = out\n\n"
       << "[corpus]\n"
       << "path = corpus.jsonl\n"
       << "gazetteer_mc = gazetteer_mc.txt\n"
       << "gazetteer_loc = gazetteer_loc.txt\n"
       << "gazetteer_cc = gazetteer_cc.txt\n"
       << "judgments = judgments.csv\n\n"
       << "[context]\n"
       << "interval = " << interval << "\n"
       << "medical_conditions = ehec\n"
       << "locations = lower_saxony\n\n"
       << "[detect]\n"
       << "terms = ehec\n"
       << "range = " << range << "\n"
       << "methods = c1,c2,c3,f_stat,ewma\n"
       << "cases_csv = curves.csv\n\n"
       << "[lda]\n"
       << "topics = 4\n"
       << "iterations = 300\n\n"
       << "[rank]\n"
       << "steps = 20000\n\n"
       << "[eval]\n"
       << "folds = 10\n"
       << "train_fraction = 0.8\n";
}

}  // namespace epint

#endif  // EPINT_PIPELINE_HPP
