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

#ifndef FENSE_EMBEDDING_H_
#define FENSE_EMBEDDING_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fense/metric.h"

namespace fense {

using EmbeddingVector = std::vector<double>;

// Source of sentence embeddings. Implementations return identical vectors for
// identical texts within one instance and must be safe for concurrent
// EmbedBatch calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual int dim() const = 0;
  // One vector per input text, in input order. Throws ProviderError.
  virtual std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) const = 0;
  // Short identifier recorded in report metadata, e.g. "test:7".
  virtual std::string Describe() const = 0;

  EmbeddingVector Embed(const std::string& text) const;
};

// dot(u, v) / (|u| |v|) clamped to [-1, 1]. Throws std::invalid_argument on a
// dimension mismatch or an all-zero vector.
double Cosine(std::span<const double> u, std::span<const double> v);

// Mean cosine between the candidate and each reference.
double SbertScore(const std::string& candidate,
                  const std::vector<std::string>& references,
                  const EmbeddingProvider& provider);

SentenceMetric MakeSbertMetric(std::shared_ptr<const EmbeddingProvider> provider);

// Deterministic provider: L2-normalised bag of hashed Porter stems. Texts with
// the same stem multiset embed identically. Requires dim >= 8.
std::shared_ptr<const EmbeddingProvider> MakeTestEmbedder(int dim,
                                                          std::uint64_t seed);

// Read-only provider over newline-delimited {"text": ..., "vec": [...]}
// records. Throws FormatError on malformed files and MissingEmbeddingError for
// unknown texts.
std::shared_ptr<const EmbeddingProvider> LoadFileProvider(const std::string& path);

// Client for `POST <endpoint>/embed` with {"texts": [...]} returning
// {"dim": D, "vectors": [[...], ...]}. Results are cached per text.
std::shared_ptr<const EmbeddingProvider> MakeHttpProvider(
    const std::string& endpoint);

// Parses "test:SEED", "file:PATH" or "http:URL".
std::shared_ptr<const EmbeddingProvider> MakeProviderFromSpec(
    const std::string& spec);

inline constexpr int kTestEmbedderDefaultDim = 256;

}  // namespace fense

#endif  // FENSE_EMBEDDING_H_
