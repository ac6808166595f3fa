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
#include <stdexcept>

#include "fense/error_detector.h"
#include "fense/errors.h"

namespace fense {
namespace {

struct Span {
  std::size_t start;
  std::size_t length;
};

std::vector<TokenSeq> TokenizeAll(const std::vector<std::string>& phrases) {
  std::vector<TokenSeq> out;
  for (const auto& p : phrases) out.push_back(Tokenize(p));
  // Longest first so "followed by" wins over any single-token prefix.
  std::stable_sort(out.begin(), out.end(), [](const TokenSeq& a, const TokenSeq& b) {
    return a.size() > b.size();
  });
  return out;
}

// Non-overlapping occurrences of any phrase, scanned left to right.
std::vector<Span> FindPhrases(const TokenSeq& tokens,
                              const std::vector<TokenSeq>& phrases) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    for (const auto& phrase : phrases) {
      if (i + phrase.size() <= tokens.size() &&
          std::equal(phrase.begin(), phrase.end(), tokens.begin() + i)) {
        spans.push_back({i, phrase.size()});
        i += phrase.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return spans;
}

const std::vector<TokenSeq>& ConnectorTokens() {
  static const auto* tokens = new std::vector<TokenSeq>(TokenizeAll(ClauseConnectors()));
  return *tokens;
}

const std::vector<TokenSeq>& AdverbialTokens() {
  static const auto* tokens = new std::vector<TokenSeq>(TokenizeAll(Adverbials()));
  return *tokens;
}

void Append(TokenSeq& tokens, const TokenSeq& tail) {
  tokens.insert(tokens.end(), tail.begin(), tail.end());
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Rules applied in this order, so deletions see the clean caption and the
// incomplete tail stays last.
constexpr std::array<ErrorType, 5> kApplicationOrder = {
    ErrorType::kMissingConjunction, ErrorType::kMissingVerb,
    ErrorType::kRepeatedEvent, ErrorType::kRepeatedAdverb,
    ErrorType::kIncompleteSentence};

}  // namespace

std::string_view ErrorTypeName(ErrorType type) {
  switch (type) {
    case ErrorType::kIncompleteSentence:
      return "IncompleteSentence";
    case ErrorType::kRepeatedEvent:
      return "RepeatedEvent";
    case ErrorType::kRepeatedAdverb:
      return "RepeatedAdverb";
    case ErrorType::kMissingConjunction:
      return "MissingConjunction";
    case ErrorType::kMissingVerb:
      return "MissingVerb";
  }
  return "";
}

std::optional<ErrorType> ParseErrorType(std::string_view name) {
  for (ErrorType type : kAllErrorTypes) {
    if (ErrorTypeName(type) == name) return type;
  }
  return std::nullopt;
}

const std::vector<std::string>& IncompleteTailPhrases() {
  static const auto* phrases = new std::vector<std::string>{
      "and", "and a", "and the", "followed by", "with a", "as a"};
  return *phrases;
}

const std::vector<std::string>& ClauseConnectors() {
  static const auto* connectors = new std::vector<std::string>{
      "and", "while", "as", "then", "followed by", "before", "after"};
  return *connectors;
}

const std::vector<std::string>& Adverbials() {
  static const auto* adverbials = new std::vector<std::string>{
      "nearby",         "loudly",       "quietly",
      "softly",         "repeatedly",   "continuously",
      "several times",  "in the background", "in the distance",
      "outside"};
  return *adverbials;
}

const std::vector<std::string>& VerbSeedWords() {
  static const auto* seeds = new std::vector<std::string>{
      "play", "speak", "blow", "sizzle", "bark", "ring", "hum", "crackle"};
  return *seeds;
}

Corruptor::Corruptor() {
  for (const auto& seed : VerbSeedWords()) verb_stems_.insert(Stem(seed));
}

Corruptor::Corruptor(const std::vector<std::string>& clean_corpus) : Corruptor() {
  std::map<std::string, std::set<std::string>> forms_by_stem;
  for (const auto& caption : clean_corpus) {
    for (const auto& token : Tokenize(caption)) {
      forms_by_stem[Stem(token)].insert(token);
    }
  }
  for (const auto& [stem, forms] : forms_by_stem) {
    if (forms.size() < 2) continue;
    const bool has_ing = std::any_of(forms.begin(), forms.end(), [](const auto& f) {
      return f.size() > 4 && EndsWith(f, "ing");
    });
    if (has_ing) verb_stems_.insert(stem);
  }
}

bool Corruptor::IsVerb(std::string_view token) const {
  return verb_stems_.contains(Stem(token));
}

void Corruptor::Apply(TokenSeq& tokens, ErrorType type, Rng& rng) const {
  const auto inapplicable = [&](const char* why) {
    throw InapplicableRuleError(std::string(ErrorTypeName(type)) + ": " + why +
                                " in \"" + JoinTokens(tokens) + "\"");
  };

  switch (type) {
    case ErrorType::kIncompleteSentence: {
      const auto& phrases = IncompleteTailPhrases();
      Append(tokens, Tokenize(phrases[rng.Uniform(phrases.size())]));
      return;
    }
    case ErrorType::kRepeatedEvent: {
      std::vector<TokenSeq> clauses;
      std::size_t begin = 0;
      auto spans = FindPhrases(tokens, ConnectorTokens());
      spans.push_back({tokens.size(), 0});
      for (const auto& span : spans) {
        if (span.start > begin) {
          clauses.emplace_back(tokens.begin() + begin, tokens.begin() + span.start);
        }
        begin = span.start + span.length;
      }
      if (clauses.empty()) inapplicable("no clause");
      const TokenSeq clause = clauses[rng.Uniform(clauses.size())];
      const auto& connectors = ConnectorTokens();
      Append(tokens, connectors[rng.Uniform(connectors.size())]);
      Append(tokens, clause);
      return;
    }
    case ErrorType::kRepeatedAdverb: {
      const auto spans = FindPhrases(tokens, AdverbialTokens());
      if (spans.empty()) inapplicable("no adverbial");
      // Draw among distinct adverbials, not occurrences.
      std::vector<TokenSeq> present;
      for (const auto& span : spans) {
        TokenSeq phrase(tokens.begin() + span.start,
                        tokens.begin() + span.start + span.length);
        if (std::find(present.begin(), present.end(), phrase) == present.end()) {
          present.push_back(std::move(phrase));
        }
      }
      Append(tokens, present[rng.Uniform(present.size())]);
      return;
    }
    case ErrorType::kMissingConjunction: {
      const auto spans = FindPhrases(tokens, ConnectorTokens());
      if (spans.empty()) inapplicable("no connector");
      const Span span = spans[rng.Uniform(spans.size())];
      tokens.erase(tokens.begin() + span.start,
                   tokens.begin() + span.start + span.length);
      return;
    }
    case ErrorType::kMissingVerb: {
      std::vector<std::size_t> positions;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (IsVerb(tokens[i])) positions.push_back(i);
      }
      if (positions.empty()) inapplicable("no verb");
      tokens.erase(tokens.begin() + positions[rng.Uniform(positions.size())]);
      return;
    }
  }
}

CorruptionResult Corruptor::Corrupt(const std::string& caption,
                                    const std::set<ErrorType>& types,
                                    Rng& rng) const {
  if (types.empty()) throw std::invalid_argument("corrupt: no error type requested");
  TokenSeq tokens = Tokenize(caption);
  if (tokens.size() < 3) {
    throw std::invalid_argument("corrupt: caption needs at least 3 tokens: \"" +
                                caption + "\"");
  }
  for (ErrorType type : kApplicationOrder) {
    if (types.contains(type)) Apply(tokens, type, rng);
  }
  return {JoinTokens(tokens), ErrorLabelSet(types)};
}

SyntheticDataset BuildSyntheticDataset(const std::vector<std::string>& clean,
                                       std::uint64_t seed) {
  if (clean.empty()) throw std::invalid_argument("synthetic dataset: empty corpus");
  const Corruptor corruptor(clean);
  Rng rng(seed);
  SyntheticDataset dataset;
  dataset.records.reserve(clean.size() * 2);

  for (const auto& caption : clean) {
    const TokenSeq tokens = Tokenize(caption);
    dataset.records.push_back({JoinTokens(tokens), ErrorLabelSet()});
    if (tokens.size() < 3) {
      ++dataset.skipped;
      continue;
    }

    const std::size_t wanted = rng.Bernoulli(kTwoErrorProbability) ? 2 : 1;
    std::vector<ErrorType> pool(kAllErrorTypes.begin(), kAllErrorTypes.end());
    std::set<ErrorType> chosen;
    std::optional<CorruptionResult> result;
    while (chosen.size() < wanted && !pool.empty()) {
      const std::size_t pick = rng.Uniform(pool.size());
      const ErrorType type = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      std::set<ErrorType> attempt = chosen;
      attempt.insert(type);
      Rng trial = rng;
      try {
        result = corruptor.Corrupt(caption, attempt, trial);
      } catch (const InapplicableRuleError&) {
        continue;
      }
      chosen = std::move(attempt);
      rng = trial;
    }
    if (!result) {
      ++dataset.skipped;
      continue;
    }
    dataset.records.push_back({std::move(result->text), std::move(result->labels)});
  }

  rng.Shuffle(std::span<LabeledCaption>(dataset.records));
  return dataset;
}

}  // namespace fense
