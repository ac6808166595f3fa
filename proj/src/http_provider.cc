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

#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "fense/embedding.h"
#include "fense/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace fense {
namespace {

using nlohmann::json;

class HttpProvider : public EmbeddingProvider {
 public:
  explicit HttpProvider(const std::string& endpoint) : endpoint_(endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
      throw std::invalid_argument("http provider endpoint needs a scheme: " +
                                  endpoint);
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    base_ = endpoint.substr(0, path_start);
    std::string prefix =
        path_start == std::string::npos ? "" : endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    if (prefix.size() >= 6 && prefix.compare(prefix.size() - 6, 6, "/embed") == 0) {
      path_ = prefix;
    } else {
      path_ = prefix + "/embed";
    }
  }

  // Unknown (0) until the service has answered once.
  int dim() const override {
    std::lock_guard<std::mutex> lock(mu_);
    return dim_;
  }

  std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) const override {
    std::vector<std::string> missing;
    {
      std::lock_guard<std::mutex> lock(mu_);
      for (const auto& text : texts) {
        if (!cache_.contains(text)) missing.push_back(text);
      }
    }
    if (!missing.empty()) Fetch(missing);

    std::lock_guard<std::mutex> lock(mu_);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(cache_.at(text));
    return out;
  }

  std::string Describe() const override { return "http:" + endpoint_; }

 private:
  void Fetch(const std::vector<std::string>& texts) const {
    httplib::Client client(base_);
    client.set_connection_timeout(10);
    client.set_read_timeout(120);
    const json request = {{"texts", texts}};
    auto response = client.Post(path_, request.dump(), "application/json");
    if (!response) {
      throw ProviderError("embedding request to " + endpoint_ + " failed: " +
                          httplib::to_string(response.error()));
    }
    if (response->status != 200) {
      throw ProviderError("embedding service returned HTTP " +
                          std::to_string(response->status));
    }
    json body;
    try {
      body = json::parse(response->body);
    } catch (const json::parse_error& e) {
      throw ProviderError(std::string("malformed embedding response: ") + e.what());
    }
    if (!body.is_object() || !body.contains("dim") || !body["dim"].is_number_integer() ||
        !body.contains("vectors") || !body["vectors"].is_array()) {
      throw ProviderError("embedding response must be {\"dim\": D, \"vectors\": [...]}");
    }
    const int dim = body["dim"].get<int>();
    const auto& vectors = body["vectors"];
    if (dim < 1 || vectors.size() != texts.size()) {
      throw ProviderError("embedding response holds " +
                          std::to_string(vectors.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
    }

    std::vector<EmbeddingVector> parsed;
    parsed.reserve(vectors.size());
    for (const auto& v : vectors) {
      if (!v.is_array() || static_cast<int>(v.size()) != dim) {
        throw ProviderError("embedding response vector has wrong length");
      }
      EmbeddingVector vec;
      vec.reserve(v.size());
      for (const auto& x : v) {
        if (!x.is_number()) throw ProviderError("non-numeric embedding value");
        vec.push_back(x.get<double>());
      }
      parsed.push_back(std::move(vec));
    }

    std::lock_guard<std::mutex> lock(mu_);
    if (dim_ != 0 && dim_ != dim) {
      throw ProviderError("embedding dimension changed from " +
                          std::to_string(dim_) + " to " + std::to_string(dim));
    }
    dim_ = dim;
    // First answer wins so repeated lookups stay identical within a run.
    for (std::size_t i = 0; i < texts.size(); ++i) {
      cache_.emplace(texts[i], std::move(parsed[i]));
    }
  }

  std::string endpoint_;
  std::string base_;
  std::string path_;
  mutable std::mutex mu_;
  mutable int dim_ = 0;
  mutable std::unordered_map<std::string, EmbeddingVector> cache_;
};

}  // namespace

std::shared_ptr<const EmbeddingProvider> MakeHttpProvider(
    const std::string& endpoint) {
  return std::make_shared<HttpProvider>(endpoint);
}

}  // namespace fense
