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

#ifndef FENSE_FENSE_H_
#define FENSE_FENSE_H_

#include <memory>
#include <string>
#include <vector>

#include "fense/detector_model.h"
#include "fense/embedding.h"
#include "fense/metric.h"

namespace fense {

// score / penalty_factor when p_error exceeds the threshold (strictly),
// otherwise score. Throws std::invalid_argument for a negative score or an
// invalid config.
double Penalize(double score, double p_error, const DetectorConfig& config);

// Mean embedding cosine with the references, penalized when the detector
// flags the candidate. References are never run through the detector.
double FenseScore(const std::string& candidate,
                  const std::vector<std::string>& references,
                  const EmbeddingProvider& provider,
                  const FluencyDetector& detector, const DetectorConfig& config);

// Wraps any non-negative metric with the candidate-side fluency penalty.
SentenceMetric MakePenalizedMetric(SentenceMetric base,
                                   std::shared_ptr<const FluencyDetector> detector,
                                   DetectorConfig config);

SentenceMetric MakeFenseMetric(std::shared_ptr<const EmbeddingProvider> provider,
                               std::shared_ptr<const FluencyDetector> detector,
                               DetectorConfig config);

}  // namespace fense

#endif  // FENSE_FENSE_H_
