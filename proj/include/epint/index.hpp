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

#ifndef EPINT_INDEX_HPP
#define EPINT_INDEX_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "epint/corpus.hpp"

namespace epint {

/// Token stream of one tweet. Hashtag tokens appear both in `tokens`
/// (with the '#' stripped) and in `hashtags`.
struct TokenizedTweet {
  std::string tweet_id;
  std::vector<std::string> tokens;
  std::set<std::string> hashtags;
  bool has_url = false;
};

namespace detail {

// Token characters: ASCII alphanumerics, '_' (hashtags like
// lower_saxony), and any byte >= 0x80 so UTF-8 sequences stay intact.
inline bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
}

}  // namespace detail

/// Lowercases, strips URL spans (scheme prefix up to whitespace, sets
/// has_url), splits on non-token characters. '#' followed by a token
/// marks it as a hashtag; the token is emitted without the '#'.
inline TokenizedTweet tokenize(const std::string& text) {
  TokenizedTweet out;
  std::string lowered = to_lower(text);

  // Blank out URL spans before splitting.
  for (const char* scheme : {"http://", "https://"}) {
    size_t pos = 0;
    while ((pos = lowered.find(scheme, pos)) != std::string::npos) {
      size_t end = pos;
      while (end < lowered.size() && !std::isspace(static_cast<unsigned char>(lowered[end])))
        ++end;
      std::fill(lowered.begin() + pos, lowered.begin() + end, ' ');
      out.has_url = true;
      pos = end;
    }
  }

  size_t i = 0;
  const size_t n = lowered.size();
  while (i < n) {
    bool hashtag = false;
    if (lowered[i] == '#' && i + 1 < n &&
        detail::is_token_char(static_cast<unsigned char>(lowered[i + 1]))) {
      hashtag = true;
      ++i;
    }
    if (!detail::is_token_char(static_cast<unsigned char>(lowered[i]))) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < n && detail::is_token_char(static_cast<unsigned char>(lowered[i]))) ++i;
    std::string token = lowered.substr(start, i - start);
    if (hashtag) out.hashtags.insert(token);
    out.tokens.push_back(std::move(token));
  }
  return out;
}

/// Tokenized tweet plus the corpus metadata retrieval needs.
struct IndexedTweet {
  TokenizedTweet tok;
  Timestamp timestamp = 0;
  Day day = 0;
};

/// Immutable after build; posting lists are sorted ascending and hold each
/// tweet id at most once.
struct InvertedIndex {
  std::map<std::string, std::vector<std::string>> postings;
  std::map<Day, std::vector<std::string>> by_date;
  std::vector<IndexedTweet> docs;
  std::unordered_map<std::string, size_t> doc_of;

  const IndexedTweet& doc(const std::string& id) const {
    auto it = doc_of.find(id);
    if (it == doc_of.end()) throw Error("unknown tweet id '" + id + "'");
    return docs[it->second];
  }

  bool has(const std::string& id) const { return doc_of.count(id) > 0; }
};

inline InvertedIndex build_index(const std::vector<Tweet>& tweets) {
  InvertedIndex idx;
  idx.docs.reserve(tweets.size());
  for (const Tweet& t : tweets) {
    if (!idx.doc_of.emplace(t.id, idx.docs.size()).second)
      throw Error("duplicate tweet id '" + t.id + "'");
    IndexedTweet doc;
    doc.tok = tokenize(t.text);
    doc.tok.tweet_id = t.id;
    doc.timestamp = t.timestamp;
    doc.day = day_of(t.timestamp);
    idx.by_date[doc.day].push_back(t.id);
    std::set<std::string> distinct(doc.tok.tokens.begin(), doc.tok.tokens.end());
    for (const std::string& token : distinct) idx.postings[token].push_back(t.id);
    idx.docs.push_back(std::move(doc));
  }
  for (auto& [token, ids] : idx.postings) std::sort(ids.begin(), ids.end());
  for (auto& [day, ids] : idx.by_date) std::sort(ids.begin(), ids.end());
  return idx;
}

/// Conjunctive boolean retrieval: tweets containing ALL query terms,
/// newest first (ties: id ascending), truncated to `limit`.
inline std::vector<std::string> retrieve(const InvertedIndex& index,
                                         const std::set<std::string>& terms,
                                         size_t limit) {
  if (terms.empty()) throw Error("retrieve: empty query");
  std::vector<std::string> result;
  bool first = true;
  for (const std::string& term : terms) {
    auto it = index.postings.find(term);
    if (it == index.postings.end()) return {};
    if (first) {
      result = it->second;
      first = false;
    } else {
      std::vector<std::string> merged;
      std::set_intersection(result.begin(), result.end(), it->second.begin(),
                            it->second.end(), std::back_inserter(merged));
      result = std::move(merged);
      if (result.empty()) return {};
    }
  }
  std::sort(result.begin(), result.end(), [&](const std::string& a, const std::string& b) {
    Timestamp ta = index.doc(a).timestamp, tb = index.doc(b).timestamp;
    if (ta != tb) return ta > tb;
    return a < b;
  });
  if (result.size() > limit) result.resize(limit);
  return result;
}

/// Deterministic text dump (`token<TAB>id1,id2,...`) for golden-file tests.
inline std::string dump_index(const InvertedIndex& index) {
  std::string out;
  for (const auto& [token, ids] : index.postings) {
    out += token;
    out += '\t';
    out += join(ids, ",");
    out += '\n';
  }
  return out;
}

}  // namespace epint

#endif  // EPINT_INDEX_HPP
