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

#ifndef FENSE_METRIC_H_
#define FENSE_METRIC_H_

#include <functional>
#include <string>
#include <vector>

namespace fense {

struct MetricScore {
  std::string metric_name;
  double value = 0.0;
};

// Scores one candidate caption against a set of reference captions. All
// metrics in the toolkit (n-gram, embedding, penalized) are adapted to this
// shape so the benchmark can treat them uniformly.
using SentenceMetric = std::function<double(
    const std::string& candidate, const std::vector<std::string>& references)>;

struct NamedMetric {
  std::string name;
  SentenceMetric score;
};

}  // namespace fense

#endif  // FENSE_METRIC_H_
