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

#include "fense/embedding.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "fense/errors.h"
#include "fense/textproc.h"
#include "json.hpp"

namespace fense {
namespace {

using nlohmann::json;

std::uint64_t SeededFnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class TestEmbedder : public EmbeddingProvider {
 public:
  TestEmbedder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim < 8) throw std::invalid_argument("test embedder needs dim >= 8");
  }

  int dim() const override { return dim_; }

  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) const override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(EmbedOne(text));
    return out;
  }

  std::string Describe() const override {
    return "test:" + std::to_string(seed_) + "/dim=" + std::to_string(dim_);
  }

 private:
  EmbeddingVector EmbedOne(const std::string& text) const {
    EmbeddingVector vec(static_cast<std::size_t>(dim_), 0.0);
    for (const auto& token : Tokenize(text)) {
      vec[SeededFnv1a(Stem(token), seed_) % static_cast<std::uint64_t>(dim_)] +=
          1.0;
    }
    double squared = 0.0;
    for (double v : vec) squared += v * v;
    if (squared > 0.0) {
      const double norm = std::sqrt(squared);
      for (double& v : vec) v /= norm;
    }
    return vec;
  }

  int dim_;
  std::uint64_t seed_;
};

class FileProvider : public EmbeddingProvider {
 public:
  explicit FileProvider(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path, 0, "cannot open embedding file");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json record;
      try {
        record = json::parse(line);
      } catch (const json::parse_error& e) {
        throw FormatError(path, line_no, e.what());
      }
      if (!record.is_object() || !record.contains("text") ||
          !record["text"].is_string() || !record.contains("vec") ||
          !record["vec"].is_array()) {
        throw FormatError(path, line_no,
                          "expected {\"text\": string, \"vec\": [numbers]}");
      }
      EmbeddingVector vec;
      for (const auto& v : record["vec"]) {
        if (!v.is_number()) throw FormatError(path, line_no, "non-numeric vec entry");
        vec.push_back(v.get<double>());
      }
      if (vec.empty()) throw FormatError(path, line_no, "empty vector");
      if (dim_ == 0) dim_ = static_cast<int>(vec.size());
      if (static_cast<int>(vec.size()) != dim_) {
        throw FormatError(path, line_no, "vector length " +
                                             std::to_string(vec.size()) +
                                             " differs from " + std::to_string(dim_));
      }
      auto text = record["text"].get<std::string>();
      if (!vectors_.emplace(text, std::move(vec)).second) {
        throw FormatError(path, line_no, "duplicate text \"" + text + "\"");
      }
    }
    if (dim_ == 0) throw FormatError(path, 0, "embedding file holds no records");
  }

  int dim() const override { return dim_; }

  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) const override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
      auto it = vectors_.find(text);
      if (it == vectors_.end()) throw MissingEmbeddingError(text);
      out.push_back(it->second);
    }
    return out;
  }

  std::string Describe() const override { return "file:" + path_; }

 private:
  std::string path_;
  int dim_ = 0;
  std::unordered_map<std::string, EmbeddingVector> vectors_;
};

}  // namespace

EmbeddingVector EmbeddingProvider::Embed(const std::string& text) const {
  auto batch = EmbedBatch({text});
  if (batch.size() != 1) throw ProviderError("provider returned wrong batch size");
  return std::move(batch.front());
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine: dimension mismatch (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw std::invalid_argument("cosine: zero vector");
  }
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

double SbertScore(const std::string& candidate,
                  const std::vector<std::string>& references,
                  const EmbeddingProvider& provider) {
  if (references.empty()) {
    throw std::invalid_argument("sbert: at least one reference is required");
  }
  std::vector<std::string> texts;
  texts.reserve(references.size() + 1);
  texts.push_back(candidate);
  texts.insert(texts.end(), references.begin(), references.end());
  const auto vectors = provider.EmbedBatch(texts);
  if (vectors.size() != texts.size()) {
    throw ProviderError("provider returned " + std::to_string(vectors.size()) +
                        " vectors for " + std::to_string(texts.size()) + " texts");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    sum += Cosine(vectors[0], vectors[i]);
  }
  return sum / static_cast<double>(references.size());
}

SentenceMetric MakeSbertMetric(std::shared_ptr<const EmbeddingProvider> provider) {
  return [provider = std::move(provider)](
             const std::string& candidate,
             const std::vector<std::string>& references) {
    return SbertScore(candidate, references, *provider);
  };
}

std::shared_ptr<const EmbeddingProvider> MakeTestEmbedder(int dim,
                                                          std::uint64_t seed) {
  return std::make_shared<TestEmbedder>(dim, seed);
}

std::shared_ptr<const EmbeddingProvider> LoadFileProvider(const std::string& path) {
  return std::make_shared<FileProvider>(path);
}

std::shared_ptr<const EmbeddingProvider> MakeProviderFromSpec(
    const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("provider must be file:PATH, http:URL or test:SEED");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "test") {
    std::size_t consumed = 0;
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(arg, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (arg.empty() || consumed != arg.size()) {
      throw std::invalid_argument("test provider seed must be an integer: " + arg);
    }
    return MakeTestEmbedder(kTestEmbedderDefaultDim, seed);
  }
  if (kind == "file") return LoadFileProvider(arg);
  // "http:http://host:port" and "http://host:port" are both accepted.
  if (kind == "http" || kind == "https") {
    return MakeHttpProvider(arg.rfind("http", 0) == 0 ? arg : spec);
  }
  throw std::invalid_argument("unknown provider kind: " + kind);
}

}  // namespace fense
