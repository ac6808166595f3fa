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

#include "fense/formats.h"

#include <fstream>
#include <set>
#include <stdexcept>
#include <utility>

#include "fense/errors.h"
#include "fense/jsonl.h"

namespace fense {
namespace {

using nlohmann::json;

const json& Field(const json& j, const char* key) {
  if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string StringField(const json& j, const char* key) {
  const json& v = Field(j, key);
  if (!v.is_string()) {
    throw std::invalid_argument(std::string("field \"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

std::string NonEmptyStringField(const json& j, const char* key) {
  std::string s = StringField(j, key);
  if (s.empty()) throw std::invalid_argument(std::string("field \"") + key + "\" is empty");
  return s;
}

std::optional<std::string> OptionalString(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw std::invalid_argument(std::string("field \"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

const char* GoldName(Gold gold) {
  switch (gold) {
    case Gold::kA:
      return "A";
    case Gold::kB:
      return "B";
    case Gold::kExcluded:
      return "Excluded";
  }
  return "";
}

const char* DecisionName(Decision decision) {
  switch (decision) {
    case Decision::kA:
      return "A";
    case Decision::kB:
      return "B";
    case Decision::kUndecided:
      return "Undecided";
  }
  return "";
}

json AccuracyJson(const CategoryAccuracy& cell) {
  json j = {{"correct", cell.correct}, {"included", cell.included}};
  const auto accuracy = cell.accuracy();
  j["accuracy"] = accuracy ? json(*accuracy) : json(nullptr);
  return j;
}

template <typename T, typename Parse>
std::vector<T> ReadAll(std::istream& in, const std::string& source, Parse parse) {
  std::vector<T> out;
  ForEachJsonLine(in, source, [&](const json& j, std::size_t) { out.push_back(parse(j)); });
  return out;
}

template <typename Fn>
auto WithFile(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  return fn(in, path);
}

template <typename T>
std::string FormatAll(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) out += ToJsonLine(ToJson(item));
  return out;
}

}  // namespace

json ToJson(const AudioEntry& entry) {
  json j = {{"audio_id", entry.audio_id}, {"references", entry.references}};
  if (entry.audio_path) j["audio_path"] = *entry.audio_path;
  return j;
}

AudioEntry AudioEntryFromJson(const json& j) {
  AudioEntry entry;
  entry.audio_id = NonEmptyStringField(j, "audio_id");
  const json& refs = Field(j, "references");
  if (!refs.is_array() || refs.empty()) {
    throw std::invalid_argument("\"references\" must be a non-empty array");
  }
  std::set<std::string> seen;
  for (const auto& r : refs) {
    if (!r.is_string()) throw std::invalid_argument("references must be strings");
    if (!seen.insert(r.get<std::string>()).second) {
      throw std::invalid_argument("duplicate reference \"" + r.get<std::string>() +
                                  "\" for audio " + entry.audio_id);
    }
    entry.references.push_back(r.get<std::string>());
  }
  entry.audio_path = OptionalString(j, "audio_path");
  return entry;
}

json ToJson(const Caption& caption) {
  json j = {{"text", caption.text}, {"source", caption.source}};
  if (!caption.audio_id.empty()) j["audio_id"] = caption.audio_id;
  if (caption.decoding) j["decoding"] = *caption.decoding;
  return j;
}

Caption CaptionFromJson(const json& j) {
  Caption c;
  c.text = NonEmptyStringField(j, "text");
  c.source = NonEmptyStringField(j, "source");
  c.audio_id = OptionalString(j, "audio_id").value_or("");
  c.decoding = OptionalString(j, "decoding");
  return c;
}

json ToJson(const CaptionPair& pair) {
  json j = {{"pair_id", pair.pair_id},
            {"audio_id", pair.audio_id},
            {"category", CategoryName(pair.category)},
            {"caption_a", ToJson(pair.caption_a)},
            {"caption_b", ToJson(pair.caption_b)}};
  if (pair.similarity_fallback) j["similarity_fallback"] = true;
  return j;
}

CaptionPair CaptionPairFromJson(const json& j) {
  CaptionPair pair;
  pair.pair_id = NonEmptyStringField(j, "pair_id");
  pair.audio_id = NonEmptyStringField(j, "audio_id");
  const std::string category = StringField(j, "category");
  const auto parsed = ParseCategory(category);
  if (!parsed) throw std::invalid_argument("unknown category \"" + category + "\"");
  pair.category = *parsed;
  pair.caption_a = CaptionFromJson(Field(j, "caption_a"));
  pair.caption_b = CaptionFromJson(Field(j, "caption_b"));
  if (pair.caption_a.audio_id.empty()) pair.caption_a.audio_id = pair.audio_id;
  if (pair.caption_b.audio_id.empty()) pair.caption_b.audio_id = pair.audio_id;
  auto it = j.find("similarity_fallback");
  if (it != j.end()) {
    if (!it->is_boolean()) throw std::invalid_argument("\"similarity_fallback\" must be a boolean");
    pair.similarity_fallback = it->get<bool>();
  }
  if (pair.caption_a.text == pair.caption_b.text) {
    throw std::invalid_argument("pair " + pair.pair_id + " has identical captions");
  }
  return pair;
}

json ToJson(const Judgment& judgment) {
  return {{"pair_id", judgment.pair_id},
          {"rater_id", judgment.rater_id},
          {"choice", ChoiceName(judgment.choice)},
          {"timestamp", judgment.timestamp_ms}};
}

Judgment JudgmentFromJson(const json& j) {
  Judgment judgment;
  judgment.pair_id = NonEmptyStringField(j, "pair_id");
  judgment.rater_id = NonEmptyStringField(j, "rater_id");
  const std::string choice = StringField(j, "choice");
  const auto parsed = ParseChoice(choice);
  if (!parsed) throw std::invalid_argument("unknown choice \"" + choice + "\"");
  judgment.choice = *parsed;
  auto it = j.find("timestamp");
  if (it != j.end()) {
    if (!it->is_number_integer()) {
      throw std::invalid_argument("\"timestamp\" must be integer milliseconds");
    }
    judgment.timestamp_ms = it->get<std::int64_t>();
  }
  return judgment;
}

json ToJson(const LabeledCaption& record) {
  json types = json::array();
  for (ErrorType t : record.labels.types()) types.push_back(ErrorTypeName(t));
  return {{"text", record.text}, {"types", types}, {"error", record.labels.overall_error()}};
}

LabeledCaption LabeledCaptionFromJson(const json& j) {
  LabeledCaption record;
  record.text = StringField(j, "text");
  const json& types = Field(j, "types");
  if (!types.is_array()) throw std::invalid_argument("\"types\" must be an array");
  for (const auto& t : types) {
    if (!t.is_string()) throw std::invalid_argument("error types must be strings");
    const auto parsed = ParseErrorType(t.get<std::string>());
    if (!parsed) {
      throw std::invalid_argument("unknown error type \"" + t.get<std::string>() + "\"");
    }
    record.labels.Add(*parsed);
  }
  auto it = j.find("error");
  if (it != j.end()) {
    if (!it->is_boolean()) throw std::invalid_argument("\"error\" must be a boolean");
    if (it->get<bool>() != record.labels.overall_error()) {
      throw std::invalid_argument("\"error\" disagrees with \"types\"");
    }
  }
  return record;
}

json ToJson(const BenchmarkReport& report) {
  json categories = json::object();
  for (const auto& [category, cell] : report.categories) {
    categories[std::string(CategoryName(category))] = AccuracyJson(cell);
  }
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"pair_id", r.pair_id},
                       {"category", CategoryName(r.category)},
                       {"gold", GoldName(r.gold)},
                       {"decision", DecisionName(r.decision)},
                       {"correct", r.correct}});
  }
  return {{"metric", report.metric},
          {"categories", categories},
          {"total", AccuracyJson(report.total)},
          {"excluded", report.excluded},
          {"unjudged", report.unjudged},
          {"undecided", report.undecided},
          {"pairs", records}};
}

json ToJson(const WinFractionReport& report) {
  json systems = json::object();
  for (const auto& [name, w] : report.systems) {
    systems[name] = {{"wins", w.wins}, {"decided", w.decided}, {"fraction", w.fraction()}};
  }
  return {{"systems", systems},
          {"omitted", report.omitted},
          {"same_system_pairs", report.same_system_pairs}};
}

std::vector<AudioEntry> ReadDataset(std::istream& in, const std::string& source) {
  std::vector<AudioEntry> out;
  std::set<std::string> ids;
  ForEachJsonLine(in, source, [&](const json& j, std::size_t line) {
    AudioEntry entry = AudioEntryFromJson(j);
    if (!ids.insert(entry.audio_id).second) {
      throw FormatError(source, line, "duplicate audio_id " + entry.audio_id);
    }
    out.push_back(std::move(entry));
  });
  return out;
}

std::vector<AudioEntry> ReadDataset(const std::string& path) {
  return WithFile(path, [](std::istream& in, const std::string& s) { return ReadDataset(in, s); });
}

std::vector<MachineCaption> ReadMachineCaptions(std::istream& in,
                                                const std::string& source) {
  return ReadAll<MachineCaption>(in, source, [](const json& j) {
    MachineCaption m;
    m.audio_id = NonEmptyStringField(j, "audio_id");
    m.caption.text = NonEmptyStringField(j, "text");
    m.caption.source = NonEmptyStringField(j, "system");
    if (m.caption.source == kHumanSource) {
      throw std::invalid_argument("machine system may not be named \"human\"");
    }
    m.caption.audio_id = m.audio_id;
    m.caption.decoding = OptionalString(j, "decoding");
    return m;
  });
}

std::vector<MachineCaption> ReadMachineCaptions(const std::string& path) {
  return WithFile(path, [](std::istream& in, const std::string& s) {
    return ReadMachineCaptions(in, s);
  });
}

std::map<std::string, std::vector<Caption>> GroupByAudio(
    const std::vector<MachineCaption>& captions) {
  std::map<std::string, std::vector<Caption>> out;
  for (const auto& m : captions) out[m.audio_id].push_back(m.caption);
  return out;
}

std::vector<CaptionPair> ReadPairs(std::istream& in, const std::string& source) {
  std::vector<CaptionPair> out;
  std::set<std::string> ids;
  ForEachJsonLine(in, source, [&](const json& j, std::size_t line) {
    CaptionPair pair = CaptionPairFromJson(j);
    if (!ids.insert(pair.pair_id).second) {
      throw FormatError(source, line, "duplicate pair_id " + pair.pair_id);
    }
    out.push_back(std::move(pair));
  });
  return out;
}

std::vector<CaptionPair> ReadPairs(const std::string& path) {
  return WithFile(path, [](std::istream& in, const std::string& s) { return ReadPairs(in, s); });
}

std::string FormatPairs(const std::vector<CaptionPair>& pairs) { return FormatAll(pairs); }

std::vector<Judgment> ReadJudgments(std::istream& in, const std::string& source) {
  std::vector<Judgment> out;
  std::set<std::pair<std::string, std::string>> seen;
  ForEachJsonLine(in, source, [&](const json& j, std::size_t line) {
    Judgment judgment = JudgmentFromJson(j);
    if (!seen.emplace(judgment.pair_id, judgment.rater_id).second) {
      throw FormatError(source, line, "second judgment by " + judgment.rater_id +
                                          " on pair " + judgment.pair_id);
    }
    out.push_back(std::move(judgment));
  });
  return out;
}

std::vector<Judgment> ReadJudgments(const std::string& path) {
  return WithFile(path,
                  [](std::istream& in, const std::string& s) { return ReadJudgments(in, s); });
}

std::string FormatJudgments(const std::vector<Judgment>& judgments) {
  return FormatAll(judgments);
}

std::vector<LabeledCaption> ReadLabeledCaptions(std::istream& in,
                                                const std::string& source) {
  return ReadAll<LabeledCaption>(in, source, LabeledCaptionFromJson);
}

std::vector<LabeledCaption> ReadLabeledCaptions(const std::string& path) {
  return WithFile(path, [](std::istream& in, const std::string& s) {
    return ReadLabeledCaptions(in, s);
  });
}

std::string FormatLabeledCaptions(const std::vector<LabeledCaption>& records) {
  return FormatAll(records);
}

std::vector<std::string> ReadCaptionLines(std::istream& in, const std::string& source) {
  std::vector<std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] != '{') {
      out.push_back(line);
      continue;
    }
    try {
      out.push_back(StringField(json::parse(line), "text"));
    } catch (const std::exception& e) {
      throw FormatError(source, number, e.what());
    }
  }
  return out;
}

std::vector<std::string> ReadCaptionLines(const std::string& path) {
  return WithFile(path, [](std::istream& in, const std::string& s) {
    return ReadCaptionLines(in, s);
  });
}

}  // namespace fense
