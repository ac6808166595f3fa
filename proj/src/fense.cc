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

#include "fense/fense.h"

#include <stdexcept>

namespace fense {

double Penalize(double score, double p_error, const DetectorConfig& config) {
  config.Validate();
  if (score < 0.0) {
    throw std::invalid_argument("penalty is only defined for non-negative scores");
  }
  return p_error > config.threshold ? score / config.penalty_factor : score;
}

double FenseScore(const std::string& candidate,
                  const std::vector<std::string>& references,
                  const EmbeddingProvider& provider,
                  const FluencyDetector& detector, const DetectorConfig& config) {
  const double similarity = SbertScore(candidate, references, provider);
  return Penalize(similarity, detector.Predict(candidate).overall(), config);
}

SentenceMetric MakePenalizedMetric(SentenceMetric base,
                                   std::shared_ptr<const FluencyDetector> detector,
                                   DetectorConfig config) {
  config.Validate();
  return [base = std::move(base), detector = std::move(detector), config](
             const std::string& candidate,
             const std::vector<std::string>& references) {
    return Penalize(base(candidate, references),
                    detector->Predict(candidate).overall(), config);
  };
}

SentenceMetric MakeFenseMetric(std::shared_ptr<const EmbeddingProvider> provider,
                               std::shared_ptr<const FluencyDetector> detector,
                               DetectorConfig config) {
  return MakePenalizedMetric(MakeSbertMetric(std::move(provider)),
                             std::move(detector), config);
}

}  // namespace fense
