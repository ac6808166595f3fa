//
// Copyright 2026 The FENSE Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <algorithm>
#include <map>
#include <set>

#include "fense/detector_model.h"

namespace fense {
namespace {

const std::set<std::string>& FunctionWords() {
  static const auto* words = new std::set<std::string>{
      // connectors
      "and", "while", "as", "then", "followed", "by", "before", "after",
      // determiners and quantifiers
      "a", "an", "the", "some", "another", "two", "several",
      // prepositions
      "with", "in", "of", "to", "on", "at", "from", "over", "into", "through",
      // auxiliaries
      "is", "are", "was", "were", "be", "being",
      // single-word adverbials
      "nearby", "loudly", "quietly", "softly", "repeatedly", "continuously",
      "outside", "times", "background", "distance"};
  return *words;
}

const std::set<std::string>& DanglingTailWords() {
  static const auto* words = new std::set<std::string>{
      "and", "while", "as", "then", "followed", "by", "before", "after",
      "a", "an", "the", "some", "another", "with", "of", "to", "in", "on"};
  return *words;
}

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Function words stand for themselves; content words collapse to a suffix
// class so the model generalizes across vocabulary.
std::string WordClass(const std::string& token) {
  if (FunctionWords().contains(token)) return token;
  if (token.size() > 4 && EndsWith(token, "ing")) return "ING";
  if (token.size() > 2 && EndsWith(token, "s") && !EndsWith(token, "ss")) return "S";
  if (token.size() > 3 && EndsWith(token, "ed")) return "ED";
  return "W";
}

std::string LengthBucket(std::size_t n) {
  if (n <= 3) return "short";
  if (n <= 6) return "medium";
  if (n <= 10) return "long";
  return "very_long";
}

bool HasRepeatedAdverbial(const TokenSeq& tokens) {
  for (const auto& adverbial : Adverbials()) {
    const TokenSeq phrase = Tokenize(adverbial);
    int count = 0;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + i)) ++count;
    }
    if (count >= 2) return true;
  }
  return false;
}

// Token sequences of `phrases`, longest first.
std::vector<TokenSeq> PhraseTokens(const std::vector<std::string>& phrases) {
  std::vector<TokenSeq> out;
  for (const auto& p : phrases) out.push_back(Tokenize(p));
  std::stable_sort(out.begin(), out.end(),
                   [](const TokenSeq& a, const TokenSeq& b) { return a.size() > b.size(); });
  return out;
}

std::size_t MatchAt(const TokenSeq& tokens, std::size_t i, const std::vector<TokenSeq>& phrases) {
  for (const auto& p : phrases) {
    if (i + p.size() <= tokens.size() && std::equal(p.begin(), p.end(), tokens.begin() + i)) {
      return p.size();
    }
  }
  return 0;
}

// Word-class shape of every clause between connectors, with adverbials left
// out: "a dog barks loudly and men speak" gives "a W S" and "S W".
void AddClauseShapes(const TokenSeq& tokens, std::set<std::string>& names) {
  static const auto* connectors = [] {
    auto list = ClauseConnectors();
    list.push_back("with");
    return new std::vector<TokenSeq>(PhraseTokens(list));
  }();
  static const auto* adverbials = new std::vector<TokenSeq>(PhraseTokens(Adverbials()));

  std::vector<std::string> shape;
  int clauses = 0;
  const auto flush = [&] {
    std::string joined;
    for (const auto& c : shape) joined += (joined.empty() ? "" : " ") + c;
    names.insert("seg:" + (joined.empty() ? std::string("EMPTY") : joined));
    ++clauses;
    shape.clear();
  };
  for (std::size_t i = 0; i < tokens.size();) {
    if (std::size_t n = MatchAt(tokens, i, *connectors)) {
      flush();
      i += n;
    } else if (std::size_t m = MatchAt(tokens, i, *adverbials)) {
      i += m;
    } else {
      shape.push_back(WordClass(tokens[i]));
      ++i;
    }
  }
  flush();
  names.insert("clauses:" + std::to_string(std::min(clauses, 5)));
}

}  // namespace

std::uint64_t FeatureId(std::string_view name) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> FeatureNames(std::string_view caption) {
  const TokenSeq tokens = Tokenize(caption);
  std::set<std::string> names;

  TokenSeq padded;
  padded.reserve(tokens.size() + 2);
  padded.push_back("<s>");
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  padded.push_back("</s>");

  std::map<std::string, int> bigram_counts, trigram_counts;
  for (const auto& t : tokens) names.insert("u:" + t);
  for (std::size_t i = 0; i + 1 < padded.size(); ++i) {
    const std::string bigram = padded[i] + " " + padded[i + 1];
    names.insert("b:" + bigram);
    if (i > 0 && i + 2 < padded.size()) ++bigram_counts[bigram];
  }
  for (std::size_t i = 0; i + 2 < padded.size(); ++i) {
    const std::string trigram =
        padded[i] + " " + padded[i + 1] + " " + padded[i + 2];
    names.insert("t:" + trigram);
    ++trigram_counts[trigram];
  }

  std::vector<std::string> classes;
  classes.push_back("<s>");
  for (const auto& t : tokens) classes.push_back(WordClass(t));
  classes.push_back("</s>");
  for (std::size_t i = 0; i + 1 < classes.size(); ++i) {
    names.insert("c2:" + classes[i] + " " + classes[i + 1]);
  }
  for (std::size_t i = 0; i + 2 < classes.size(); ++i) {
    names.insert("c3:" + classes[i] + " " + classes[i + 1] + " " + classes[i + 2]);
  }

  if (!tokens.empty()) {
    names.insert("first:" + tokens.front());
    names.insert("last:" + tokens.back());
    if (DanglingTailWords().contains(tokens.back())) {
      names.insert(std::string(kEndsWithConnectorFeature));
    }
  }
  if (tokens.size() >= 2) {
    names.insert("last2:" + tokens[tokens.size() - 2] + " " + tokens.back());
  }
  for (const auto& [bigram, count] : bigram_counts) {
    if (count >= 2) {
      names.insert(std::string(kRepeatedBigramFeature));
      names.insert("rep_bigram:" + bigram);
    }
  }
  for (const auto& [trigram, count] : trigram_counts) {
    if (count >= 2) names.insert("rep_trigram");
  }
  if (HasRepeatedAdverbial(tokens)) {
    names.insert(std::string(kRepeatedAdverbialFeature));
  }
  AddClauseShapes(tokens, names);
  names.insert("len:" + LengthBucket(tokens.size()));
  return {names.begin(), names.end()};
}

FeatureVector ExtractFeatures(std::string_view caption) {
  FeatureVector features;
  for (const auto& name : FeatureNames(caption)) {
    features.push_back({FeatureId(name), 1.0});
  }
  std::sort(features.begin(), features.end(),
            [](const SparseFeature& a, const SparseFeature& b) { return a.id < b.id; });
  // 64-bit collisions between distinct names merge into one feature.
  features.erase(std::unique(features.begin(), features.end(),
                             [](const SparseFeature& a, const SparseFeature& b) {
                               return a.id == b.id;
                             }),
                 features.end());
  return features;
}

}  // namespace fense
