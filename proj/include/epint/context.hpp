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

#ifndef EPINT_CONTEXT_HPP
#define EPINT_CONTEXT_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "epint/detect.hpp"
#include "epint/index.hpp"
#include "epint/topics.hpp"

namespace epint {

/// The triple (time interval, medical conditions, locations) that
/// personalizes a run.
struct UserContext {
  DateInterval interval;
  std::set<std::string> medical_conditions;
  std::set<std::string> locations;

  void validate() const {
    if (medical_conditions.empty())
      throw ConfigError("user context: medical_conditions must be nonempty");
    for (const auto* terms : {&medical_conditions, &locations})
      for (const auto& t : *terms)
        if (t != to_lower(trim(t)) || t.empty())
          throw ConfigError("user context: term '" + t + "' must be lowercase and trimmed");
  }
};

enum class TermClass { MedicalCondition, Location, ComplementaryContext, Discarded };
enum class TermSource { Lda, Hashtag };

inline const char* term_class_name(TermClass c) {
  switch (c) {
    case TermClass::MedicalCondition: return "medical_condition";
    case TermClass::Location: return "location";
    case TermClass::ComplementaryContext: return "complementary_context";
    case TermClass::Discarded: return "discarded";
  }
  return "?";
}

struct ClassifiedTerm {
  std::string term;
  TermClass cls = TermClass::Discarded;
  TermSource source = TermSource::Lda;
  double weight = 0.0;  // LDA probability or co-occurrence count
};

/// Conjunctive query: the base medical condition plus expansion terms.
struct Query {
  std::string id;
  std::set<std::string> terms;
  std::string base;
};

// ---------------------------------------------------------------------------

/// Hashtags co-occurring with the user's medical conditions, counted as
/// distinct tweets inside the context interval. A condition matches as a
/// plain token or a hashtag; the matched conditions themselves are not
/// reported. Descending by count, ties lexicographic.
inline std::vector<std::pair<std::string, int>> cooccurring_hashtags(
    const InvertedIndex& index, const UserContext& context) {
  context.validate();
  std::map<std::string, int> counts;
  for (const IndexedTweet& doc : index.docs) {
    if (!context.interval.contains(doc.day)) continue;
    std::set<std::string> matched;
    for (const std::string& tok : doc.tok.tokens)
      if (context.medical_conditions.count(tok)) matched.insert(tok);
    if (matched.empty()) continue;
    for (const std::string& h : doc.tok.hashtags)
      if (!matched.count(h)) ++counts[h];
  }
  std::vector<std::pair<std::string, int>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

/// Gazetteer lookup with priority medical condition > location >
/// complementary context; unknown terms are Discarded.
inline ClassifiedTerm classify_term(const std::string& term, const Gazetteer& mc,
                                    const Gazetteer& loc, const Gazetteer& cc) {
  ClassifiedTerm out;
  out.term = term;
  if (mc.contains(term))
    out.cls = TermClass::MedicalCondition;
  else if (loc.contains(term))
    out.cls = TermClass::Location;
  else if (cc.contains(term))
    out.cls = TermClass::ComplementaryContext;
  else
    out.cls = TermClass::Discarded;
  return out;
}

struct ExpansionLimits {
  size_t top_terms_per_topic = 5;
  size_t per_class_cap = 5;
};

/// Union of classified top LDA terms and classified co-occurring
/// hashtags. Discarded terms are dropped, duplicates keep the hashtag
/// source, and each class is truncated to its cap by weight.
inline std::vector<ClassifiedTerm> expand_context(
    const UserContext& context, const TopicModel& model,
    const std::vector<std::pair<std::string, int>>& cotags, const Gazetteer& mc,
    const Gazetteer& loc, const Gazetteer& cc, const ExpansionLimits& limits = {}) {
  context.validate();
  std::map<std::string, ClassifiedTerm> picked;

  for (int k = 0; k < model.n_topics; ++k) {
    for (const auto& [term, prob] : top_terms(model, k, limits.top_terms_per_topic)) {
      ClassifiedTerm ct = classify_term(term, mc, loc, cc);
      if (ct.cls == TermClass::Discarded) continue;
      ct.source = TermSource::Lda;
      ct.weight = prob;
      auto it = picked.find(term);
      if (it == picked.end() || (it->second.source == TermSource::Lda &&
                                 it->second.weight < prob))
        picked[term] = ct;
    }
  }
  for (const auto& [tag, count] : cotags) {
    ClassifiedTerm ct = classify_term(tag, mc, loc, cc);
    if (ct.cls == TermClass::Discarded) continue;
    ct.source = TermSource::Hashtag;
    ct.weight = count;
    picked[tag] = ct;  // hashtag source wins over an LDA duplicate
  }

  std::vector<ClassifiedTerm> out;
  for (TermClass cls : {TermClass::MedicalCondition, TermClass::Location,
                        TermClass::ComplementaryContext}) {
    std::vector<ClassifiedTerm> group;
    for (const auto& [term, ct] : picked)
      if (ct.cls == cls) group.push_back(ct);
    std::sort(group.begin(), group.end(), [](const ClassifiedTerm& a, const ClassifiedTerm& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.term < b.term;
    });
    if (group.size() > limits.per_class_cap) group.resize(limits.per_class_cap);
    out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

struct QueryOptions {
  size_t max_subset = 2;
  size_t max_queries = 10000;
};

/// One query per (medical condition, expansion subset of size <=
/// max_subset) pair, including the bare base query. Deduplicated by term
/// set; ids follow enumeration order.
inline std::vector<Query> build_queries(const UserContext& context,
                                        const std::vector<ClassifiedTerm>& expansion,
                                        const QueryOptions& opts = {}) {
  context.validate();
  std::set<std::string> candidate_set(context.locations);
  for (const ClassifiedTerm& ct : expansion) {
    if (ct.cls == TermClass::Discarded)
      throw Error("build_queries: discarded term '" + ct.term + "' in expansion");
    candidate_set.insert(ct.term);
  }
  const std::vector<std::string> candidates(candidate_set.begin(), candidate_set.end());
  const size_t n = candidates.size();

  std::vector<Query> queries;
  std::set<std::set<std::string>> seen;
  auto emit = [&](const std::string& base, const std::set<std::string>& terms) {
    if (!seen.insert(terms).second) return;
    if (queries.size() >= opts.max_queries)
      throw Error("build_queries: query count exceeds cap of " +
                  std::to_string(opts.max_queries) + "; reduce max_subset");
    Query q;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "q%04zu", queries.size());
    q.id = buf;
    q.terms = terms;
    q.base = base;
    queries.push_back(std::move(q));
  };

  for (const std::string& mc : context.medical_conditions) {
    emit(mc, {mc});
    std::vector<size_t> pick;
    for (size_t size = 1; size <= opts.max_subset && size <= n; ++size) {
      // lexicographic combinations of `size` candidate indices
      pick.assign(size, 0);
      for (size_t i = 0; i < size; ++i) pick[i] = i;
      for (;;) {
        std::set<std::string> terms{mc};
        for (size_t i : pick) terms.insert(candidates[i]);
        emit(mc, terms);
        size_t i = size;
        while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }
  return queries;
}

/// Boolean retrieval with a structured query.
inline std::vector<std::string> retrieve(const InvertedIndex& index, const Query& query,
                                         size_t limit) {
  return retrieve(index, query.terms, limit);
}

/// Report lines `class<TAB>term<TAB>source<TAB>weight`, grouped by class.
inline std::string write_expansion_report(const std::vector<ClassifiedTerm>& expansion) {
  std::string out;
  for (const ClassifiedTerm& ct : expansion) {
    out += term_class_name(ct.cls);
    out += '\t';
    out += ct.term;
    out += '\t';
    out += ct.source == TermSource::Lda ? "lda" : "hashtag";
    out += '\t';
    out += format_double(ct.weight);
    out += '\n';
  }
  return out;
}

}  // namespace epint

#endif  // EPINT_CONTEXT_HPP
