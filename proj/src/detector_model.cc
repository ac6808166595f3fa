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

#include "fense/detector_model.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fense/errors.h"
#include "json.hpp"

namespace fense {
namespace {

using nlohmann::json;

constexpr std::string_view kModelFormat = "fense-error-detector";

constexpr std::array<DetectorHead, kNumHeads> kAllHeads = {
    DetectorHead::kIncompleteSentence, DetectorHead::kRepeatedEvent,
    DetectorHead::kRepeatedAdverb,     DetectorHead::kMissingConjunction,
    DetectorHead::kMissingVerb,        DetectorHead::kOverall};

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

DetectorHead HeadFor(ErrorType type) {
  return static_cast<DetectorHead>(static_cast<int>(type));
}

std::string_view HeadName(DetectorHead head) {
  if (head == DetectorHead::kOverall) return "Error";
  return ErrorTypeName(static_cast<ErrorType>(static_cast<int>(head)));
}

bool HeadLabel(const ErrorLabelSet& labels, DetectorHead head) {
  if (head == DetectorHead::kOverall) return labels.overall_error();
  return labels.Has(static_cast<ErrorType>(static_cast<int>(head)));
}

void DetectorConfig::Validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("detector threshold must lie in (0, 1)");
  }
  if (!(penalty_factor > 1.0)) {
    throw std::invalid_argument("penalty factor must exceed 1");
  }
}

DetectorModel DetectorModel::Train(const std::vector<LabeledCaption>& dataset,
                                   const TrainingConfig& config) {
  if (dataset.empty()) throw TrainingError("training set is empty");
  if (config.epochs < 1 || !(config.learning_rate > 0.0) || config.l2 < 0.0) {
    throw std::invalid_argument("invalid training configuration");
  }
  for (DetectorHead head : kAllHeads) {
    std::size_t positives = 0;
    for (const auto& record : dataset) positives += HeadLabel(record.labels, head);
    if (positives == 0 || positives == dataset.size()) {
      throw TrainingError("head " + std::string(HeadName(head)) +
                          " has only " + (positives == 0 ? "negative" : "positive") +
                          " examples");
    }
  }

  DetectorModel model;
  model.config_ = config;

  std::vector<FeatureVector> featurized;
  featurized.reserve(dataset.size());
  std::vector<std::uint64_t> ids;
  for (const auto& record : dataset) {
    featurized.push_back(ExtractFeatures(record.text));
    for (const auto& f : featurized.back()) ids.push_back(f.id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  model.feature_ids_ = std::move(ids);
  for (std::size_t i = 0; i < model.feature_ids_.size(); ++i) {
    model.vocabulary_.emplace(model.feature_ids_[i], i);
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> columns(dataset.size());
  std::vector<std::array<double, kNumHeads>> targets(dataset.size());
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    for (const auto& f : featurized[s]) {
      columns[s].emplace_back(model.vocabulary_.at(f.id), f.value);
    }
    for (DetectorHead head : kAllHeads) {
      targets[s][static_cast<std::size_t>(head)] =
          HeadLabel(dataset[s].labels, head) ? 1.0 : 0.0;
    }
  }

  for (auto& w : model.weights_) w.assign(model.feature_ids_.size(), 0.0);

  Rng rng(config.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    const double lr = config.learning_rate / std::sqrt(1.0 + epoch);
    for (std::size_t s : order) {
      for (std::size_t h = 0; h < kNumHeads; ++h) {
        const double gradient = Sigmoid(model.Logit(h, columns[s])) - targets[s][h];
        model.bias_[h] -= lr * gradient;
        auto& w = model.weights_[h];
        for (const auto& [col, value] : columns[s]) {
          w[col] -= lr * (gradient * value + config.l2 * w[col]);
        }
      }
    }
  }
  return model;
}

double DetectorModel::Logit(
    std::size_t head,
    const std::vector<std::pair<std::size_t, double>>& columns) const {
  double z = bias_[head];
  const auto& w = weights_[head];
  for (const auto& [col, value] : columns) z += w[col] * value;
  return z;
}

ErrorProbabilities DetectorModel::Predict(const std::string& caption) const {
  std::vector<std::pair<std::size_t, double>> columns;
  for (const auto& f : ExtractFeatures(caption)) {
    auto it = vocabulary_.find(f.id);
    if (it != vocabulary_.end()) columns.emplace_back(it->second, f.value);
  }
  ErrorProbabilities out;
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    out.values[h] = Sigmoid(Logit(h, columns));
  }
  return out;
}

std::string DetectorModel::Serialize() const {
  json heads = json::array();
  for (DetectorHead head : kAllHeads) {
    const auto h = static_cast<std::size_t>(head);
    heads.push_back({{"name", HeadName(head)},
                     {"bias", bias_[h]},
                     {"weights", weights_[h]}});
  }
  const json doc = {
      {"format", kModelFormat},
      {"version", kFormatVersion},
      {"training",
       {{"seed", config_.seed},
        {"epochs", config_.epochs},
        {"learning_rate", config_.learning_rate},
        {"l2", config_.l2}}},
      {"feature_ids", feature_ids_},
      {"heads", heads}};
  return doc.dump() + "\n";
}

DetectorModel DetectorModel::Deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("model", 0, e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kModelFormat) {
    throw FormatError("model", 0, "not an error-detector model file");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kFormatVersion) {
    throw FormatError("model", 0,
                      "unsupported model version " +
                          (doc.contains("version") ? doc["version"].dump()
                                                   : std::string("<missing>")));
  }
  try {
    DetectorModel model;
    const auto& training = doc.at("training");
    model.config_.seed = training.at("seed").get<std::uint64_t>();
    model.config_.epochs = training.at("epochs").get<int>();
    model.config_.learning_rate = training.at("learning_rate").get<double>();
    model.config_.l2 = training.at("l2").get<double>();
    model.feature_ids_ = doc.at("feature_ids").get<std::vector<std::uint64_t>>();
    for (std::size_t i = 0; i < model.feature_ids_.size(); ++i) {
      if (!model.vocabulary_.emplace(model.feature_ids_[i], i).second) {
        throw FormatError("model", 0, "duplicate feature id");
      }
    }
    const auto& heads = doc.at("heads");
    if (!heads.is_array() || heads.size() != kNumHeads) {
      throw FormatError("model", 0, "expected 6 heads");
    }
    for (DetectorHead head : kAllHeads) {
      const auto h = static_cast<std::size_t>(head);
      const auto& entry = heads[h];
      if (entry.at("name").get<std::string>() != HeadName(head)) {
        throw FormatError("model", 0, "unexpected head order");
      }
      model.bias_[h] = entry.at("bias").get<double>();
      model.weights_[h] = entry.at("weights").get<std::vector<double>>();
      if (model.weights_[h].size() != model.feature_ids_.size()) {
        throw FormatError("model", 0, "weight vector does not match vocabulary");
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw FormatError("model", 0, e.what());
  }
}

void DetectorModel::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model file " + path);
  out << Serialize();
  if (!out) throw std::runtime_error("failed writing model file " + path);
}

DetectorModel DetectorModel::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, "cannot open model file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Deserialize(buffer.str());
  } catch (const FormatError& e) {
    throw FormatError(path, 0, e.what());
  }
}

BinaryScores ScoreBinary(std::span<const bool> predicted,
                         std::span<const bool> gold) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("prediction and gold sizes differ");
  }
  BinaryScores s;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && gold[i]) ++s.true_positives;
    if (predicted[i] && !gold[i]) ++s.false_positives;
    if (!predicted[i] && gold[i]) ++s.false_negatives;
    if (!predicted[i] && !gold[i]) ++s.true_negatives;
  }
  const int predicted_pos = s.true_positives + s.false_positives;
  const int gold_pos = s.true_positives + s.false_negatives;
  s.no_positive_predictions = predicted_pos == 0;
  s.no_gold_positives = gold_pos == 0;
  s.precision = predicted_pos == 0 ? 0.0
                                   : static_cast<double>(s.true_positives) / predicted_pos;
  s.recall = gold_pos == 0 ? 0.0 : static_cast<double>(s.true_positives) / gold_pos;
  s.f1 = s.precision + s.recall == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

DetectorEvaluation EvaluatePredictions(
    std::span<const ErrorProbabilities> predictions,
    std::span<const ErrorLabelSet> labels, double threshold) {
  if (predictions.empty()) throw std::invalid_argument("evaluation set is empty");
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("prediction and label counts differ");
  }
  DetectorEvaluation evaluation;
  for (DetectorHead head : kAllHeads) {
    // std::vector<bool> cannot back a span.
    std::unique_ptr<bool[]> predicted(new bool[predictions.size()]);
    std::unique_ptr<bool[]> gold(new bool[predictions.size()]);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      predicted[i] = predictions[i][head] > threshold;
      gold[i] = HeadLabel(labels[i], head);
    }
    evaluation.heads[static_cast<std::size_t>(head)] =
        ScoreBinary({predicted.get(), predictions.size()},
                    {gold.get(), predictions.size()});
  }
  return evaluation;
}

DetectorEvaluation EvaluateDetector(const FluencyDetector& detector,
                                    const std::vector<LabeledCaption>& labeled,
                                    double threshold) {
  std::vector<ErrorProbabilities> predictions;
  std::vector<ErrorLabelSet> labels;
  predictions.reserve(labeled.size());
  labels.reserve(labeled.size());
  for (const auto& record : labeled) {
    predictions.push_back(detector.Predict(record.text));
    labels.push_back(record.labels);
  }
  return EvaluatePredictions(predictions, labels, threshold);
}

}  // namespace fense
