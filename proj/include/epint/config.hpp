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

#ifndef EPINT_CONFIG_HPP
#define EPINT_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epint/context.hpp"
#include "epint/detect.hpp"
#include "epint/eval.hpp"
#include "epint/topics.hpp"

namespace epint {

/// Everything one pipeline run needs, read from a sectioned key=value
/// file. Command-line flags may override `seed` and `out`.
struct PipelineConfig {
  std::optional<uint64_t> seed;  // must be set explicitly, never wall-clock
  std::string out_dir;

  std::string corpus_path;
  std::string gaz_mc_path, gaz_loc_path, gaz_cc_path;
  std::string judgments_path;

  UserContext context;
  ExpansionLimits expansion;
  QueryOptions query_opts;

  std::vector<std::string> detect_terms;
  DateInterval detect_range;
  std::vector<Method> methods;
  int window = 15;
  int buffer = 5;
  std::map<Method, double> thresholds;  // empty slots use defaults
  double omega = 0.24;
  bool population_sd = false;
  std::string cases_csv;

  LdaParams lda;

  double lambda = 1e-3;
  int64_t steps = 100000;
  size_t retrieve_limit = 500;

  CvParams cv;

  DetectorParams detector_params(Method m) const {
    DetectorParams p = DetectorParams::defaults(m);
    p.window = window;
    p.buffer = buffer;
    p.omega = omega;
    p.population_sd = population_sd;
    auto it = thresholds.find(m);
    if (it != thresholds.end()) p.threshold = it->second;
    return p;
  }
};

namespace detail {

struct RawConfig {
  std::map<std::string, std::string> entries;  // "section.key" -> value
  std::string path;

  std::optional<std::string> get(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }
};

inline RawConfig parse_raw_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RawConfig raw;
  raw.path = path;
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty())
        throw ConfigError(path + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    std::string full = section.empty() ? key : section + "." + key;
    if (!raw.entries.emplace(full, value).second)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + full + "'");
  }
  return raw;
}

template <typename Fn>
auto parse_field(const RawConfig& raw, const std::string& key, const std::string& value, Fn fn) {
  try {
    return fn(value);
  } catch (const std::exception& e) {
    throw ConfigError(raw.path + ": field '" + key + "': " + e.what());
  }
}

inline std::set<std::string> parse_term_set(const std::string& v) {
  std::set<std::string> out;
  for (const std::string& part : split(v, ',')) {
    std::string t = to_lower(trim(part));
    if (!t.empty()) out.insert(t);
  }
  return out;
}

}  // namespace detail

inline PipelineConfig load_pipeline_config(const std::string& path) {
  using detail::parse_field;
  detail::RawConfig raw = detail::parse_raw_config(path);
  PipelineConfig cfg;

  static const std::set<std::string> known = {
      "seed", "out",
      "corpus.path", "corpus.gazetteer_mc", "corpus.gazetteer_loc", "corpus.gazetteer_cc",
      "corpus.judgments",
      "context.interval", "context.medical_conditions", "context.locations",
      "context.top_terms_per_topic", "context.per_class_cap", "context.max_subset",
      "context.max_queries",
      "detect.terms", "detect.range", "detect.methods", "detect.window", "detect.buffer",
      "detect.omega", "detect.population_sd", "detect.cases_csv", "detect.threshold_c1",
      "detect.threshold_c2", "detect.threshold_c3", "detect.threshold_f_stat",
      "detect.threshold_ewma",
      "lda.topics", "lda.alpha", "lda.beta", "lda.iterations", "lda.stop_fraction",
      "rank.lambda", "rank.steps", "rank.retrieve_limit",
      "eval.folds", "eval.train_fraction"};
  for (const auto& [key, value] : raw.entries)
    if (!known.count(key))
      throw ConfigError(path + ": unknown config key '" + key + "'");

  auto to_u64 = [](const std::string& v) { return std::stoull(v); };
  auto to_i = [](const std::string& v) { return std::stoi(v); };
  auto to_i64 = [](const std::string& v) { return std::stoll(v); };
  auto to_d = [](const std::string& v) { return std::stod(v); };
  auto to_sz = [](const std::string& v) { return static_cast<size_t>(std::stoull(v)); };

  if (auto v = raw.get("seed")) cfg.seed = parse_field(raw, "seed", *v, to_u64);
  if (auto v = raw.get("out")) cfg.out_dir = *v;
  if (auto v = raw.get("corpus.path")) cfg.corpus_path = *v;
  if (auto v = raw.get("corpus.gazetteer_mc")) cfg.gaz_mc_path = *v;
  if (auto v = raw.get("corpus.gazetteer_loc")) cfg.gaz_loc_path = *v;
  if (auto v = raw.get("corpus.gazetteer_cc")) cfg.gaz_cc_path = *v;
  if (auto v = raw.get("corpus.judgments")) cfg.judgments_path = *v;

  if (auto v = raw.get("context.interval"))
    cfg.context.interval = parse_field(raw, "context.interval", *v, parse_interval);
  if (auto v = raw.get("context.medical_conditions"))
    cfg.context.medical_conditions = detail::parse_term_set(*v);
  if (auto v = raw.get("context.locations"))
    cfg.context.locations = detail::parse_term_set(*v);
  if (auto v = raw.get("context.top_terms_per_topic"))
    cfg.expansion.top_terms_per_topic = parse_field(raw, "context.top_terms_per_topic", *v, to_sz);
  if (auto v = raw.get("context.per_class_cap"))
    cfg.expansion.per_class_cap = parse_field(raw, "context.per_class_cap", *v, to_sz);
  if (auto v = raw.get("context.max_subset"))
    cfg.query_opts.max_subset = parse_field(raw, "context.max_subset", *v, to_sz);
  if (auto v = raw.get("context.max_queries"))
    cfg.query_opts.max_queries = parse_field(raw, "context.max_queries", *v, to_sz);

  if (auto v = raw.get("detect.terms")) {
    auto terms = detail::parse_term_set(*v);
    cfg.detect_terms.assign(terms.begin(), terms.end());
  }
  if (auto v = raw.get("detect.range"))
    cfg.detect_range = parse_field(raw, "detect.range", *v, parse_interval);
  if (auto v = raw.get("detect.methods"))
    for (const std::string& m : split(*v, ','))
      cfg.methods.push_back(parse_method(m));
  if (auto v = raw.get("detect.window")) cfg.window = parse_field(raw, "detect.window", *v, to_i);
  if (auto v = raw.get("detect.buffer")) cfg.buffer = parse_field(raw, "detect.buffer", *v, to_i);
  if (auto v = raw.get("detect.omega")) cfg.omega = parse_field(raw, "detect.omega", *v, to_d);
  if (auto v = raw.get("detect.population_sd")) {
    std::string b = to_lower(trim(*v));
    if (b != "true" && b != "false")
      throw ConfigError(path + ": field 'detect.population_sd': expected true or false");
    cfg.population_sd = b == "true";
  }
  if (auto v = raw.get("detect.cases_csv")) cfg.cases_csv = *v;
  for (Method m : {Method::C1, Method::C2, Method::C3, Method::F_STAT, Method::EWMA}) {
    std::string key = std::string("detect.threshold_") + method_name(m);
    if (auto v = raw.get(key)) cfg.thresholds[m] = parse_field(raw, key, *v, to_d);
  }

  if (auto v = raw.get("lda.topics")) cfg.lda.n_topics = parse_field(raw, "lda.topics", *v, to_i);
  if (auto v = raw.get("lda.alpha")) cfg.lda.alpha = parse_field(raw, "lda.alpha", *v, to_d);
  if (auto v = raw.get("lda.beta")) cfg.lda.beta = parse_field(raw, "lda.beta", *v, to_d);
  if (auto v = raw.get("lda.iterations"))
    cfg.lda.iterations = parse_field(raw, "lda.iterations", *v, to_i);
  if (auto v = raw.get("lda.stop_fraction"))
    cfg.lda.stop_fraction = parse_field(raw, "lda.stop_fraction", *v, to_d);

  if (auto v = raw.get("rank.lambda")) cfg.lambda = parse_field(raw, "rank.lambda", *v, to_d);
  if (auto v = raw.get("rank.steps")) cfg.steps = parse_field(raw, "rank.steps", *v, to_i64);
  if (auto v = raw.get("rank.retrieve_limit"))
    cfg.retrieve_limit = parse_field(raw, "rank.retrieve_limit", *v, to_sz);

  if (auto v = raw.get("eval.folds")) cfg.cv.folds = parse_field(raw, "eval.folds", *v, to_i);
  if (auto v = raw.get("eval.train_fraction"))
    cfg.cv.train_fraction = parse_field(raw, "eval.train_fraction", *v, to_d);

  // Input paths resolve against the config file's directory; the output
  // directory stays relative to the working directory.
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* p : {&cfg.corpus_path, &cfg.gaz_mc_path, &cfg.gaz_loc_path,
                         &cfg.gaz_cc_path, &cfg.judgments_path, &cfg.cases_csv})
    if (!p->empty() && std::filesystem::path(*p).is_relative())
      *p = (base / *p).lexically_normal().string();

  return cfg;
}

/// Canonical serialization of the effective configuration; hashed into
/// the run manifest so identical runs produce identical manifests.
inline std::string canonical_config(const PipelineConfig& cfg) {
  std::string out;
  auto add = [&](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
  add("seed", cfg.seed ? std::to_string(*cfg.seed) : "");
  add("corpus.path", cfg.corpus_path);
  add("corpus.gazetteer_mc", cfg.gaz_mc_path);
  add("corpus.gazetteer_loc", cfg.gaz_loc_path);
  add("corpus.gazetteer_cc", cfg.gaz_cc_path);
  add("corpus.judgments", cfg.judgments_path);
  if (cfg.context.interval.length() > 0)
    add("context.interval",
        format_date(cfg.context.interval.start) + "/" + format_date(cfg.context.interval.end));
  add("context.medical_conditions",
      join({cfg.context.medical_conditions.begin(), cfg.context.medical_conditions.end()}, ","));
  add("context.locations", join({cfg.context.locations.begin(), cfg.context.locations.end()}, ","));
  add("context.top_terms_per_topic", std::to_string(cfg.expansion.top_terms_per_topic));
  add("context.per_class_cap", std::to_string(cfg.expansion.per_class_cap));
  add("context.max_subset", std::to_string(cfg.query_opts.max_subset));
  add("context.max_queries", std::to_string(cfg.query_opts.max_queries));
  add("detect.terms", join(cfg.detect_terms, ","));
  if (cfg.detect_range.length() > 0)
    add("detect.range", format_date(cfg.detect_range.start) + "/" + format_date(cfg.detect_range.end));
  std::vector<std::string> methods;
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  add("detect.methods", join(methods, ","));
  add("detect.window", std::to_string(cfg.window));
  add("detect.buffer", std::to_string(cfg.buffer));
  add("detect.omega", format_double(cfg.omega));
  add("detect.population_sd", cfg.population_sd ? "true" : "false");
  add("detect.cases_csv", cfg.cases_csv);
  for (const auto& [m, thr] : cfg.thresholds)
    add(std::string("detect.threshold_") + method_name(m), format_double(thr));
  add("lda.topics", std::to_string(cfg.lda.n_topics));
  add("lda.alpha", format_double(cfg.lda.alpha));
  add("lda.beta", format_double(cfg.lda.beta));
  add("lda.iterations", std::to_string(cfg.lda.iterations));
  add("lda.stop_fraction", format_double(cfg.lda.stop_fraction));
  add("rank.lambda", format_double(cfg.lambda));
  add("rank.steps", std::to_string(cfg.steps));
  add("rank.retrieve_limit", std::to_string(cfg.retrieve_limit));
  add("eval.folds", std::to_string(cfg.cv.folds));
  add("eval.train_fraction", format_double(cfg.cv.train_fraction));
  return out;
}

}  // namespace epint

#endif  // EPINT_CONFIG_HPP
