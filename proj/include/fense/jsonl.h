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

#ifndef FENSE_JSONL_H_
#define FENSE_JSONL_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace fense {

using JsonLineVisitor =
    std::function<void(const nlohmann::json& record, std::size_t line)>;

// Calls `visit` for each non-blank line, numbering lines from 1. A line that
// is not valid JSON, or an exception thrown by `visit` that is not already a
// FormatError, becomes a FormatError naming `source` and the line.
void ForEachJsonLine(std::istream& in, const std::string& source,
                     const JsonLineVisitor& visit);
void ForEachJsonLineInFile(const std::string& path, const JsonLineVisitor& visit);

// Compact single-line encoding with a trailing newline.
std::string ToJsonLine(const nlohmann::json& record);

// Whole file as a string; FormatError when it cannot be opened.
std::string ReadFileOrThrow(const std::string& path);
// Replaces `path` via a temporary file in the same directory.
void WriteFileOrThrow(const std::string& path, const std::string& contents);

}  // namespace fense

#endif  // FENSE_JSONL_H_
