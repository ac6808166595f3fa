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

#ifndef FENSE_ERROR_DETECTOR_H_
#define FENSE_ERROR_DETECTOR_H_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fense/random.h"
#include "fense/textproc.h"

namespace fense {

enum class ErrorType {
  kIncompleteSentence,
  kRepeatedEvent,
  kRepeatedAdverb,
  kMissingConjunction,
  kMissingVerb,
};

inline constexpr std::array<ErrorType, 5> kAllErrorTypes = {
    ErrorType::kIncompleteSentence, ErrorType::kRepeatedEvent,
    ErrorType::kRepeatedAdverb, ErrorType::kMissingConjunction,
    ErrorType::kMissingVerb};

// "IncompleteSentence", "RepeatedEvent", ... as used in dataset files.
std::string_view ErrorTypeName(ErrorType type);
std::optional<ErrorType> ParseErrorType(std::string_view name);

// Fluency-error labels of one caption. The overall Error flag is derived, so
// it always equals "at least one type present".
class ErrorLabelSet {
 public:
  ErrorLabelSet() = default;
  explicit ErrorLabelSet(std::set<ErrorType> types) : types_(std::move(types)) {}

  void Add(ErrorType type) { types_.insert(type); }
  bool Has(ErrorType type) const { return types_.contains(type); }
  const std::set<ErrorType>& types() const { return types_; }
  bool overall_error() const { return !types_.empty(); }

  bool operator==(const ErrorLabelSet&) const = default;

 private:
  std::set<ErrorType> types_;
};

struct LabeledCaption {
  std::string text;
  ErrorLabelSet labels;

  bool operator==(const LabeledCaption&) const = default;
};

// Corruption lexicons. These are stand-ins extending the handful of examples
// known from observed system outputs; they are not an authoritative inventory.
const std::vector<std::string>& IncompleteTailPhrases();
const std::vector<std::string>& ClauseConnectors();
const std::vector<std::string>& Adverbials();
const std::vector<std::string>& VerbSeedWords();

struct CorruptionResult {
  std::string text;
  ErrorLabelSet labels;
};

// Rule-based corruption of clean captions into the five fluency-error types.
class Corruptor {
 public:
  // Verb lexicon from the seed list only.
  Corruptor();
  // Adds corpus verbs: a stem qualifies when the corpus holds at least two
  // distinct surface forms of it, one of which ends in "ing" (e.g. bark /
  // barks / barking). Nouns with only a plural form (dog / dogs) do not.
  explicit Corruptor(const std::vector<std::string>& clean_corpus);

  bool IsVerb(std::string_view token) const;
  const std::set<std::string>& verb_stems() const { return verb_stems_; }

  // Applies every requested rule (deletions first, trailing appends last) and
  // returns the space-joined corrupted tokens. Throws std::invalid_argument for
  // captions under three tokens or an empty type set, and
  // InapplicableRuleError when a requested rule has nothing to act on.
  CorruptionResult Corrupt(const std::string& caption,
                           const std::set<ErrorType>& types, Rng& rng) const;

 private:
  void Apply(TokenSeq& tokens, ErrorType type, Rng& rng) const;

  std::set<std::string> verb_stems_;
};

struct SyntheticDataset {
  std::vector<LabeledCaption> records;
  // Clean captions for which no corrupted copy could be produced.
  std::size_t skipped = 0;
};

inline constexpr double kTwoErrorProbability = 0.1;

// Every clean caption (normalized) labeled error-free plus one corrupted copy
// carrying one error type with probability 0.9 and two distinct types
// otherwise. Deterministically shuffled by `seed`.
SyntheticDataset BuildSyntheticDataset(const std::vector<std::string>& clean,
                                       std::uint64_t seed);

}  // namespace fense

#endif  // FENSE_ERROR_DETECTOR_H_
