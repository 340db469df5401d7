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

#include <gtest/gtest.h>

#include "epint/context.hpp"

using namespace epint;

namespace {

Gazetteer gaz(EntityClass cls, std::set<std::string> terms) {
  Gazetteer g;
  g.entity_class = cls;
  g.terms = std::move(terms);
  return g;
}

const Gazetteer kMc = gaz(EntityClass::MedicalCondition, {"ehec", "hus"});
const Gazetteer kLoc = gaz(EntityClass::Location, {"berlin", "hamburg", "spain"});
const Gazetteer kCc = gaz(EntityClass::ComplementaryContext, {"cucumbers", "rki"});

UserContext may_context() {
  UserContext ctx;
  ctx.interval = {parse_date("2011-05-01"), parse_date("2011-05-31")};
  ctx.medical_conditions = {"ehec"};
  ctx.locations = {"hamburg"};
  return ctx;
}

InvertedIndex index_of(const std::vector<std::string>& texts) {
  std::vector<Tweet> tweets;
  for (size_t i = 0; i < texts.size(); ++i)
    tweets.push_back(Tweet{"t" + std::to_string(i),
                           parse_timestamp("2011-05-10T08:00:00Z") +
                               static_cast<Timestamp>(i) * 60,
                           "u", texts[i]});
  return build_index(tweets);
}

TEST(CoHashtags, CorpusWithoutHashtagsIsEmpty) {
  auto idx = index_of({"ehec in hamburg", "quiet news day"});
  EXPECT_TRUE(cooccurring_hashtags(idx, may_context()).empty());
}

TEST(CoHashtags, CountsDistinctTweetsDescending) {
  auto idx = index_of({"#ehec #cucumbers", "#ehec #cucumbers #rki", "#flu #rki"});
  auto tags = cooccurring_hashtags(idx, may_context());
  ASSERT_EQ(tags.size(), 2u);
  EXPECT_EQ(tags[0], (std::pair<std::string, int>{"cucumbers", 2}));
  EXPECT_EQ(tags[1], (std::pair<std::string, int>{"rki", 1}));
}

TEST(CoHashtags, PlainTokenMentionMatches) {
  auto idx = index_of({"ehec confirmed #cucumbers"});
  auto tags = cooccurring_hashtags(idx, may_context());
  ASSERT_EQ(tags.size(), 1u);
  EXPECT_EQ(tags[0].first, "cucumbers");
}

TEST(CoHashtags, IgnoresTweetsOutsideInterval) {
  std::vector<Tweet> tweets = {
      {"in", parse_timestamp("2011-05-10T08:00:00Z"), "u", "#ehec #cucumbers"},
      {"out", parse_timestamp("2011-07-10T08:00:00Z"), "u", "#ehec #rki"},
  };
  auto tags = cooccurring_hashtags(build_index(tweets), may_context());
  ASSERT_EQ(tags.size(), 1u);
  EXPECT_EQ(tags[0].first, "cucumbers");
}

TEST(CoHashtags, RepeatedTagInOneTweetCountsOnce) {
  auto idx = index_of({"#ehec #rki #rki again #rki"});
  auto tags = cooccurring_hashtags(idx, may_context());
  ASSERT_EQ(tags.size(), 1u);
  EXPECT_EQ(tags[0], (std::pair<std::string, int>{"rki", 1}));
}

TEST(Classify, GazetteerMembership) {
  EXPECT_EQ(classify_term("ehec", kMc, kLoc, kCc).cls, TermClass::MedicalCondition);
  EXPECT_EQ(classify_term("berlin", kMc, kLoc, kCc).cls, TermClass::Location);
  EXPECT_EQ(classify_term("cucumbers", kMc, kLoc, kCc).cls, TermClass::ComplementaryContext);
  EXPECT_EQ(classify_term("zzzz", kMc, kLoc, kCc).cls, TermClass::Discarded);
}

TEST(Classify, PriorityOnArtificialOverlap) {
  auto overlap_loc = gaz(EntityClass::Location, {"ehec"});
  EXPECT_EQ(classify_term("ehec", kMc, overlap_loc, kCc).cls, TermClass::MedicalCondition);
  auto overlap_cc = gaz(EntityClass::ComplementaryContext, {"berlin"});
  EXPECT_EQ(classify_term("berlin", kMc, kLoc, overlap_cc).cls, TermClass::Location);
}

TEST(Classify, IsPureFunction) {
  for (int i = 0; i < 3; ++i)
    EXPECT_EQ(classify_term("hus", kMc, kLoc, kCc).cls, TermClass::MedicalCondition);
}

TopicModel tiny_model(std::vector<std::string> vocab, std::vector<double> probs) {
  TopicModel m;
  m.n_topics = 1;
  m.vocabulary = std::move(vocab);
  m.topic_word = {std::move(probs)};
  m.doc_topic = {{1.0}};
  m.alpha = 1;
  m.beta = 0.01;
  return m;
}

TEST(Expand, EmptyInputsGiveEmptyExpansion) {
  TopicModel m;
  m.n_topics = 0;
  auto out = expand_context(may_context(), m, {}, kMc, kLoc, kCc);
  EXPECT_TRUE(out.empty());
}

TEST(Expand, ThreeClassesFromBothSources) {
  auto model = tiny_model({"cucumbers", "spain", "zzzz"}, {0.5, 0.3, 0.2});
  std::vector<std::pair<std::string, int>> cotags = {{"hus", 4}};
  auto out = expand_context(may_context(), model, cotags, kMc, kLoc, kCc);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].term, "hus");
  EXPECT_EQ(out[0].cls, TermClass::MedicalCondition);
  EXPECT_EQ(out[0].source, TermSource::Hashtag);
  EXPECT_DOUBLE_EQ(out[0].weight, 4.0);
  EXPECT_EQ(out[1].term, "spain");
  EXPECT_EQ(out[1].cls, TermClass::Location);
  EXPECT_EQ(out[2].term, "cucumbers");
  EXPECT_EQ(out[2].cls, TermClass::ComplementaryContext);
}

TEST(Expand, DuplicateTermKeepsHashtagSource) {
  auto model = tiny_model({"cucumbers"}, {1.0});
  std::vector<std::pair<std::string, int>> cotags = {{"cucumbers", 7}};
  auto out = expand_context(may_context(), model, cotags, kMc, kLoc, kCc);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].source, TermSource::Hashtag);
  EXPECT_DOUBLE_EQ(out[0].weight, 7.0);
}

TEST(Expand, DiscardedTermsNeverSurvive) {
  auto model = tiny_model({"zzzz", "qqqq"}, {0.6, 0.4});
  auto out = expand_context(may_context(), model, {{"wwww", 9}}, kMc, kLoc, kCc);
  EXPECT_TRUE(out.empty());
}

TEST(Expand, PerClassCapTruncatesByWeight) {
  std::vector<std::pair<std::string, int>> cotags = {
      {"berlin", 9}, {"hamburg", 5}, {"spain", 2}};
  TopicModel empty;
  empty.n_topics = 0;
  ExpansionLimits limits;
  limits.per_class_cap = 2;
  auto out = expand_context(may_context(), empty, cotags, kMc, kLoc, kCc, limits);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].term, "berlin");
  EXPECT_EQ(out[1].term, "hamburg");
}

std::set<std::set<std::string>> term_sets(const std::vector<Query>& queries) {
  std::set<std::set<std::string>> out;
  for (const Query& q : queries) out.insert(q.terms);
  return out;
}

TEST(BuildQueries, EmptyExpansionGivesBaseOnly) {
  auto queries = build_queries(may_context(), {});
  // candidates = locations(hamburg); base plus subsets of {hamburg}
  ASSERT_GE(queries.size(), 1u);
  EXPECT_EQ(queries[0].terms, (std::set<std::string>{"ehec"}));
  EXPECT_EQ(queries[0].base, "ehec");
}

TEST(BuildQueries, SingletonSubsetsEnumerated) {
  UserContext ctx = may_context();
  ctx.locations = {};
  std::vector<ClassifiedTerm> expansion = {
      {"hamburg", TermClass::Location, TermSource::Lda, 0.2},
      {"hus", TermClass::MedicalCondition, TermSource::Hashtag, 3},
      {"cucumbers", TermClass::ComplementaryContext, TermSource::Hashtag, 2},
  };
  QueryOptions opts;
  opts.max_subset = 1;
  auto queries = build_queries(ctx, expansion, opts);
  EXPECT_EQ(term_sets(queries),
            (std::set<std::set<std::string>>{{"ehec"},
                                             {"ehec", "hamburg"},
                                             {"ehec", "hus"},
                                             {"ehec", "cucumbers"}}));
}

TEST(BuildQueries, MaxSubsetZeroGivesBasesOnly) {
  UserContext ctx = may_context();
  ctx.medical_conditions = {"ehec", "hus"};
  QueryOptions opts;
  opts.max_subset = 0;
  auto queries = build_queries(ctx, {}, opts);
  EXPECT_EQ(term_sets(queries),
            (std::set<std::set<std::string>>{{"ehec"}, {"hus"}}));
}

TEST(BuildQueries, EveryQueryContainsItsBase) {
  UserContext ctx = may_context();
  ctx.medical_conditions = {"ehec", "hus"};
  std::vector<ClassifiedTerm> expansion = {
      {"spain", TermClass::Location, TermSource::Lda, 0.2},
      {"cucumbers", TermClass::ComplementaryContext, TermSource::Hashtag, 2},
  };
  auto queries = build_queries(ctx, expansion);
  for (const Query& q : queries) EXPECT_TRUE(q.terms.count(q.base)) << q.id;
}

TEST(BuildQueries, CountBoundHolds) {
  UserContext ctx = may_context();
  std::vector<ClassifiedTerm> expansion = {
      {"spain", TermClass::Location, TermSource::Lda, 0.2},
      {"berlin", TermClass::Location, TermSource::Lda, 0.1},
      {"cucumbers", TermClass::ComplementaryContext, TermSource::Hashtag, 2},
  };
  QueryOptions opts;
  opts.max_subset = 2;
  auto queries = build_queries(ctx, expansion, opts);
  // n = 4 candidates (3 expansion + hamburg); 1 + C(4,1) + C(4,2) = 11
  EXPECT_LE(queries.size(), 11u);
  EXPECT_EQ(term_sets(queries).size(), queries.size());  // deduplicated
}

TEST(BuildQueries, BaseTermInExpansionDeduplicates) {
  UserContext ctx = may_context();
  ctx.locations = {};
  std::vector<ClassifiedTerm> expansion = {
      {"ehec", TermClass::MedicalCondition, TermSource::Hashtag, 5}};
  QueryOptions opts;
  opts.max_subset = 1;
  auto queries = build_queries(ctx, expansion, opts);
  EXPECT_EQ(term_sets(queries), (std::set<std::set<std::string>>{{"ehec"}}));
}

TEST(BuildQueries, CapOverflowAdvises) {
  UserContext ctx = may_context();
  std::vector<ClassifiedTerm> expansion;
  for (int i = 0; i < 30; ++i)
    expansion.push_back({"term" + std::to_string(i), TermClass::ComplementaryContext,
                         TermSource::Lda, 1.0});
  QueryOptions opts;
  opts.max_subset = 3;
  opts.max_queries = 100;
  try {
    build_queries(ctx, expansion, opts);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("max_subset"), std::string::npos);
  }
}

TEST(BuildQueries, DiscardedTermRejected) {
  std::vector<ClassifiedTerm> expansion = {
      {"zzzz", TermClass::Discarded, TermSource::Lda, 0.1}};
  EXPECT_THROW(build_queries(may_context(), expansion), Error);
}

TEST(ContextValidation, RejectsBadTerms) {
  UserContext ctx = may_context();
  ctx.medical_conditions = {};
  EXPECT_THROW(ctx.validate(), ConfigError);
  ctx = may_context();
  ctx.medical_conditions = {"EHEC"};
  EXPECT_THROW(ctx.validate(), ConfigError);
}

TEST(ExpansionReport, TabSeparatedLines) {
  std::vector<ClassifiedTerm> expansion = {
      {"hus", TermClass::MedicalCondition, TermSource::Hashtag, 4}};
  EXPECT_EQ(write_expansion_report(expansion), "medical_condition\thus\thashtag\t4\n");
}

}  // namespace
