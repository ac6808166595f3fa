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

#ifndef FENSE_ERRORS_H_
#define FENSE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

// Invalid arguments are reported with std::invalid_argument throughout. The
// types below cover the remaining failure classes callers distinguish.
namespace fense {

// An embedding provider could not produce vectors (transport, malformed
// response, dimension mismatch).
class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file-backed provider was asked for a text it does not hold.
class MissingEmbeddingError : public ProviderError {
 public:
  explicit MissingEmbeddingError(const std::string& text)
      : ProviderError("no embedding for text: \"" + text + "\""), text_(text) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// A corruption rule cannot be applied to the given caption.
class InapplicableRuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The benchmark reference-exclusion protocol cannot be satisfied for a pair.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input record. `line` is 1-based; 0 when not line oriented.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& source, std::size_t line,
              const std::string& message)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : "") +
                           ": " + message),
        source_(source),
        line_(line) {}
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace fense

#endif  // FENSE_ERRORS_H_
