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

#ifndef FENSE_FORMATS_H_
#define FENSE_FORMATS_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fense/benchmark.h"
#include "fense/error_detector.h"
#include "json.hpp"

namespace fense {

// JSON encodings of the domain records. FromJson functions throw
// std::invalid_argument or nlohmann::json::exception on malformed input;
// the Read functions turn those into FormatError with a line number.

nlohmann::json ToJson(const AudioEntry& entry);
AudioEntry AudioEntryFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const Caption& caption);
Caption CaptionFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const CaptionPair& pair);
CaptionPair CaptionPairFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const Judgment& judgment);
Judgment JudgmentFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const LabeledCaption& record);
LabeledCaption LabeledCaptionFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const BenchmarkReport& report);
nlohmann::json ToJson(const WinFractionReport& report);

// {"audio_id", "references", "audio_path"?}. Rejects duplicate audio ids and
// duplicate references within an entry.
std::vector<AudioEntry> ReadDataset(std::istream& in, const std::string& source);
std::vector<AudioEntry> ReadDataset(const std::string& path);

// A machine caption line: {"audio_id", "system", "text", "decoding"?}.
struct MachineCaption {
  std::string audio_id;
  Caption caption;
};
std::vector<MachineCaption> ReadMachineCaptions(std::istream& in,
                                                const std::string& source);
std::vector<MachineCaption> ReadMachineCaptions(const std::string& path);
// Groups by audio id, keeping file order within each group.
std::map<std::string, std::vector<Caption>> GroupByAudio(
    const std::vector<MachineCaption>& captions);

std::vector<CaptionPair> ReadPairs(std::istream& in, const std::string& source);
std::vector<CaptionPair> ReadPairs(const std::string& path);
std::string FormatPairs(const std::vector<CaptionPair>& pairs);

// Rejects a second judgment for the same (pair_id, rater_id).
std::vector<Judgment> ReadJudgments(std::istream& in, const std::string& source);
std::vector<Judgment> ReadJudgments(const std::string& path);
std::string FormatJudgments(const std::vector<Judgment>& judgments);

// {"text", "types", "error"}; "error" must agree with "types".
std::vector<LabeledCaption> ReadLabeledCaptions(std::istream& in,
                                                const std::string& source);
std::vector<LabeledCaption> ReadLabeledCaptions(const std::string& path);
std::string FormatLabeledCaptions(const std::vector<LabeledCaption>& records);

// One caption per line, either plain text or {"text": ...}. Blank lines are
// skipped.
std::vector<std::string> ReadCaptionLines(std::istream& in, const std::string& source);
std::vector<std::string> ReadCaptionLines(const std::string& path);

}  // namespace fense

#endif  // FENSE_FORMATS_H_
