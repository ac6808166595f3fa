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

#include "fense/jsonl.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fense/errors.h"

namespace fense {

void ForEachJsonLine(std::istream& in, const std::string& source,
                     const JsonLineVisitor& visit) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(source, number, std::string("invalid JSON: ") + e.what());
    }
    try {
      visit(record, number);
    } catch (const FormatError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(source, number, e.what());
    } catch (const std::invalid_argument& e) {
      throw FormatError(source, number, e.what());
    }
  }
}

void ForEachJsonLineInFile(const std::string& path, const JsonLineVisitor& visit) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  ForEachJsonLine(in, path, visit);
}

std::string ToJsonLine(const nlohmann::json& record) { return record.dump() + "\n"; }

std::string ReadFileOrThrow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileOrThrow(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(path, 0, "cannot write file");
    out << contents;
    if (!out.flush()) throw FormatError(path, 0, "write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw FormatError(path, 0, "cannot replace file");
  }
}

}  // namespace fense
