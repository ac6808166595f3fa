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

#ifndef FENSE_BENCHMARK_H_
#define FENSE_BENCHMARK_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fense/embedding.h"
#include "fense/metric.h"

namespace fense {

// HC: two human captions of the same audio. HI: a human caption of the audio
// and one of another audio. HM: human vs machine. MM: machine vs machine.
enum class PairCategory { kHC, kHI, kHM, kMM };
inline constexpr std::array<PairCategory, 4> kAllCategories = {
    PairCategory::kHC, PairCategory::kHI, PairCategory::kHM, PairCategory::kMM};

std::string_view CategoryName(PairCategory category);
std::optional<PairCategory> ParseCategory(std::string_view name);

inline constexpr std::string_view kHumanSource = "human";

struct Caption {
  std::string text;
  // "human" or the name of the captioning system.
  std::string source;
  // Audio the caption was written for (differs from the pair's audio for the
  // mismatched side of an HI pair).
  std::string audio_id;
  std::optional<std::string> decoding;

  bool is_human() const { return source == kHumanSource; }
  bool operator==(const Caption&) const = default;
};

struct AudioEntry {
  std::string audio_id;
  std::vector<std::string> references;
  std::optional<std::string> audio_path;

  bool operator==(const AudioEntry&) const = default;
};

struct CaptionPair {
  std::string pair_id;
  std::string audio_id;
  Caption caption_a;
  Caption caption_b;
  PairCategory category = PairCategory::kHC;
  // Every candidate exceeded the similarity filter; this is the least similar.
  bool similarity_fallback = false;

  bool operator==(const CaptionPair&) const = default;
};

enum class Choice { kA, kB, kNotSure };
std::string_view ChoiceName(Choice choice);
std::optional<Choice> ParseChoice(std::string_view name);

struct Judgment {
  std::string pair_id;
  std::string rater_id;
  Choice choice = Choice::kNotSure;
  std::int64_t timestamp_ms = 0;

  bool operator==(const Judgment&) const = default;
};

enum class Gold { kA, kB, kExcluded };
enum class Decision { kA, kB, kUndecided };

inline constexpr double kPairSimilarityCeiling = 0.9;
inline constexpr std::size_t kMaxMachinePairsPerAudio = 4;

struct PairGenerationResult {
  std::vector<CaptionPair> pairs;
  // audio_id -> reason, for entries that could not yield the full pair set.
  std::map<std::string, std::string> skipped;
  std::string provider;
};

// Per audio: one HC, one HI, one HM and one to four MM pairs. Candidate pairs
// with similarity above 0.9 are filtered out; when none survive the least
// similar candidate is kept and flagged. HI and HM use the audio's first
// reference as the correct human caption. Deterministic in `seed`.
PairGenerationResult GeneratePairs(
    const std::vector<AudioEntry>& dataset,
    const std::map<std::string, std::vector<Caption>>& machine_captions,
    const EmbeddingProvider& provider, std::uint64_t seed);

// Strict majority of A/B votes; ties and all-NotSure are excluded.
Gold GoldFromJudgments(std::span<const Choice> choices);
Gold GoldFromJudgments(std::span<const Judgment> judgments);

// Reference sets each side is scored against; a side's score is the mean over
// its sets.
struct EvalReferences {
  std::vector<std::vector<std::string>> side_a;
  std::vector<std::vector<std::string>> side_b;
};

// HC: each side against the references minus its own text. HI/HM: both sides
// against the references minus the correct human caption. MM: both sides
// against every leave-one-out subset. Throws ProtocolError when a required
// caption is not among the references.
EvalReferences EvalReferencesFor(const CaptionPair& pair, const AudioEntry& entry);

Decision MetricPairDecision(const SentenceMetric& metric, const CaptionPair& pair,
                            const AudioEntry& entry);

struct CategoryAccuracy {
  int correct = 0;
  int included = 0;
  // Percent; nullopt when nothing was included.
  std::optional<double> accuracy() const;
};

struct PairRecord {
  std::string pair_id;
  PairCategory category = PairCategory::kHC;
  Gold gold = Gold::kExcluded;
  Decision decision = Decision::kUndecided;
  bool correct = false;
};

struct BenchmarkReport {
  std::string metric;
  std::map<PairCategory, CategoryAccuracy> categories;
  CategoryAccuracy total;
  // Pairs dropped because their human votes tie or carry no A/B signal.
  int excluded = 0;
  // Pairs without any judgment (also left out of every accuracy).
  int unjudged = 0;
  // Included pairs on which the metric tied; counted as incorrect.
  int undecided = 0;
  // Ordered by pair_id.
  std::vector<PairRecord> records;
};

// Throws std::invalid_argument naming the first pair whose audio_id is not in
// the dataset, or the first judgment whose pair_id is unknown.
void ValidateBenchmarkInputs(const std::vector<CaptionPair>& pairs,
                             const std::vector<Judgment>& judgments,
                             const std::vector<AudioEntry>& dataset);

BenchmarkReport BenchmarkMetric(const NamedMetric& metric,
                                const std::vector<CaptionPair>& pairs,
                                const std::vector<Judgment>& judgments,
                                const std::vector<AudioEntry>& dataset);

// Same as BenchmarkMetric with gold labels supplied directly. Pairs missing
// from `gold` count as unjudged.
BenchmarkReport BenchmarkAgainstGold(const NamedMetric& metric,
                                     const std::vector<CaptionPair>& pairs,
                                     const std::map<std::string, Gold>& gold,
                                     const std::vector<AudioEntry>& dataset);

struct KappaResult {
  double kappa = 0.0;
  // Every assignment fell into one category; kappa is reported as 1.
  bool degenerate = false;
};

// Fleiss kappa over per-item category counts. Every row must sum to the same
// number of raters n >= 2. Computed in exact integer arithmetic up to the
// final division.
KappaResult FleissKappa(const std::vector<std::vector<int>>& counts);

struct WinFraction {
  int wins = 0;
  int decided = 0;
  double fraction() const { return decided == 0 ? 0.0 : double(wins) / decided; }
};

struct WinFractionReport {
  std::map<std::string, WinFraction> systems;
  // Systems that appear only in undecided pairs.
  std::vector<std::string> omitted;
  // MM pairs whose two captions share a source system.
  int same_system_pairs = 0;
};

// Fraction of decided MM comparisons each system wins. `decisions` maps
// pair_id to the winning side; pairs not listed count as undecided.
WinFractionReport WinFractions(const std::vector<CaptionPair>& pairs,
                               const std::map<std::string, Decision>& decisions);

Decision DecisionFromGold(Gold gold);

}  // namespace fense

#endif  // FENSE_BENCHMARK_H_
