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

#ifndef FENSE_DETECTOR_MODEL_H_
#define FENSE_DETECTOR_MODEL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fense/error_detector.h"

namespace fense {

// Six classifier outputs: one per error type plus the overall Error head.
enum class DetectorHead {
  kIncompleteSentence,
  kRepeatedEvent,
  kRepeatedAdverb,
  kMissingConjunction,
  kMissingVerb,
  kOverall,
};
inline constexpr std::size_t kNumHeads = 6;

DetectorHead HeadFor(ErrorType type);
std::string_view HeadName(DetectorHead head);
bool HeadLabel(const ErrorLabelSet& labels, DetectorHead head);

struct ErrorProbabilities {
  std::array<double, kNumHeads> values{};

  double operator[](DetectorHead head) const {
    return values[static_cast<std::size_t>(head)];
  }
  double overall() const { return (*this)[DetectorHead::kOverall]; }
};

// Anything that can estimate fluency-error probabilities for a caption.
class FluencyDetector {
 public:
  virtual ~FluencyDetector() = default;
  virtual ErrorProbabilities Predict(const std::string& caption) const = 0;
};

// Penalty configuration. Defaults: threshold 0.9, divide by 10.
struct DetectorConfig {
  double threshold = 0.9;
  double penalty_factor = 10.0;

  // Throws std::invalid_argument unless 0 < threshold < 1 and factor > 1.
  void Validate() const;
};

struct SparseFeature {
  std::uint64_t id;
  double value;
};
// Sorted by id, ids unique.
using FeatureVector = std::vector<SparseFeature>;

std::uint64_t FeatureId(std::string_view name);

// Hashed surface features: word uni/bi/trigrams with sentence boundaries,
// first/last token and bigram, a coarse word-class bigram sequence, the
// word-class shape of each clause between connectors, a length bucket, and
// indicators for a trailing connector or determiner, a repeated
// bigram or trigram, and a repeated adverbial.
FeatureVector ExtractFeatures(std::string_view caption);
// Human-readable feature names behind ExtractFeatures (same set, unhashed).
std::vector<std::string> FeatureNames(std::string_view caption);

inline constexpr std::string_view kEndsWithConnectorFeature = "end_conn_or_det";
inline constexpr std::string_view kRepeatedBigramFeature = "rep_bigram";
inline constexpr std::string_view kRepeatedAdverbialFeature = "rep_adverbial";

struct TrainingConfig {
  int epochs = 12;
  double learning_rate = 0.5;
  double l2 = 1e-6;
  std::uint64_t seed = 0;

  bool operator==(const TrainingConfig&) const = default;
};

// Six independent logistic heads over one shared feature vocabulary.
// Immutable after training; Predict is safe to call concurrently.
class DetectorModel : public FluencyDetector {
 public:
  static constexpr int kFormatVersion = 1;

  // Seeded SGD. Throws TrainingError naming the first head whose labels are
  // single-class in `dataset`.
  static DetectorModel Train(const std::vector<LabeledCaption>& dataset,
                             const TrainingConfig& config);

  ErrorProbabilities Predict(const std::string& caption) const override;

  // Versioned JSON; Deserialize rejects unknown formats and versions.
  std::string Serialize() const;
  static DetectorModel Deserialize(const std::string& text);
  void Save(const std::string& path) const;
  static DetectorModel Load(const std::string& path);

  const TrainingConfig& training_config() const { return config_; }
  std::size_t vocabulary_size() const { return feature_ids_.size(); }

 private:
  DetectorModel() = default;
  double Logit(std::size_t head, const std::vector<std::pair<std::size_t, double>>&
                                     columns) const;

  TrainingConfig config_;
  std::vector<std::uint64_t> feature_ids_;
  std::unordered_map<std::uint64_t, std::size_t> vocabulary_;
  std::array<std::vector<double>, kNumHeads> weights_;
  std::array<double, kNumHeads> bias_{};
};

struct BinaryScores {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  int true_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Precision is reported as 0 when nothing was predicted positive.
  bool no_positive_predictions = false;
  bool no_gold_positives = false;
};

BinaryScores ScoreBinary(std::span<const bool> predicted,
                         std::span<const bool> gold);

struct DetectorEvaluation {
  std::array<BinaryScores, kNumHeads> heads;

  const BinaryScores& operator[](DetectorHead head) const {
    return heads[static_cast<std::size_t>(head)];
  }
};

// A head predicts positive when its probability exceeds `threshold`.
DetectorEvaluation EvaluatePredictions(
    std::span<const ErrorProbabilities> predictions,
    std::span<const ErrorLabelSet> labels, double threshold);

DetectorEvaluation EvaluateDetector(const FluencyDetector& detector,
                                    const std::vector<LabeledCaption>& labeled,
                                    double threshold);

}  // namespace fense

#endif  // FENSE_DETECTOR_MODEL_H_
