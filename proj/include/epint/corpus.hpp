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

#ifndef EPINT_CORPUS_HPP
#define EPINT_CORPUS_HPP

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "epint/common.hpp"
#include "epint/date.hpp"

namespace epint {

/// One microblog message.
struct Tweet {
  std::string id;
  Timestamp timestamp = 0;
  std::string user;
  std::string text;

  bool operator==(const Tweet& o) const {
    return id == o.id && timestamp == o.timestamp && user == o.user && text == o.text;
  }
};

enum class EntityClass { MedicalCondition, Location, ComplementaryContext };

inline const char* entity_class_name(EntityClass c) {
  switch (c) {
    case EntityClass::MedicalCondition: return "medical_condition";
    case EntityClass::Location: return "location";
    case EntityClass::ComplementaryContext: return "complementary_context";
  }
  return "?";
}

/// Class-labeled term dictionary. Terms are lowercase, trimmed, nonempty;
/// std::set keeps iteration order deterministic.
struct Gazetteer {
  EntityClass entity_class = EntityClass::MedicalCondition;
  std::set<std::string> terms;

  bool contains(const std::string& term) const { return terms.count(term) > 0; }
};

// ---------------------------------------------------------------------------
// corpus files: UTF-8, one JSON object per line, keys id / ts / user / text

inline std::vector<Tweet> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file '" + path + "'");
  std::vector<Tweet> tweets;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ":" + std::to_string(lineno) + ": malformed record: " + e.what());
    }
    for (const char* key : {"id", "ts", "user", "text"})
      if (!rec.contains(key) || !rec[key].is_string())
        throw IoError(path + ":" + std::to_string(lineno) +
                      ": missing or non-string field '" + key + "'");
    Tweet t;
    t.id = rec["id"].get<std::string>();
    t.user = rec["user"].get<std::string>();
    t.text = rec["text"].get<std::string>();
    try {
      t.timestamp = parse_timestamp(rec["ts"].get<std::string>());
    } catch (const IoError& e) {
      throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (t.id.empty())
      throw IoError(path + ":" + std::to_string(lineno) + ": empty id");
    if (t.text.empty())
      throw IoError(path + ":" + std::to_string(lineno) + ": empty text");
    if (!seen.insert(t.id).second)
      throw IoError(path + ":" + std::to_string(lineno) + ": duplicate id '" + t.id + "'");
    tweets.push_back(std::move(t));
  }
  return tweets;
}

inline std::string serialize_tweet(const Tweet& t) {
  nlohmann::json rec;
  rec["id"] = t.id;
  rec["ts"] = format_timestamp(t.timestamp);
  rec["user"] = t.user;
  rec["text"] = t.text;
  return rec.dump();  // keys emitted in sorted order: deterministic bytes
}

inline void save_corpus(const std::string& path, const std::vector<Tweet>& tweets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file '" + path + "'");
  for (const Tweet& t : tweets) out << serialize_tweet(t) << '\n';
  if (!out) throw IoError("write failed on '" + path + "'");
}

// ---------------------------------------------------------------------------
// gazetteer files: one term per line, '#' comment lines ignored

inline Gazetteer load_gazetteer(const std::string& path, EntityClass cls) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gazetteer file '" + path + "'");
  Gazetteer gaz;
  gaz.entity_class = cls;
  std::string line;
  while (std::getline(in, line)) {
    std::string term = trim(line);
    if (term.empty() || term[0] == '#') continue;
    gaz.terms.insert(to_lower(term));
  }
  return gaz;
}

/// The three gazetteers of one run must be pairwise disjoint
/// (complementary context excludes locations and medical conditions).
inline void check_gazetteers_disjoint(const Gazetteer& mc, const Gazetteer& loc,
                                      const Gazetteer& cc) {
  auto clash = [](const Gazetteer& a, const Gazetteer& b) -> const std::string* {
    for (const auto& t : a.terms)
      if (b.contains(t)) return &t;
    return nullptr;
  };
  const Gazetteer* gs[3] = {&mc, &loc, &cc};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (const std::string* t = clash(*gs[i], *gs[j]))
        throw ConfigError("gazetteers not disjoint: term '" + *t + "' appears in both " +
                          entity_class_name(gs[i]->entity_class) + " and " +
                          entity_class_name(gs[j]->entity_class));
}

}  // namespace epint

#endif  // EPINT_CORPUS_HPP
