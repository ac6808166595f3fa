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

#include "fense/annotation_service.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "fense/errors.h"
#include "fense/formats.h"
#include "fense/jsonl.h"
#include "json.hpp"

namespace fense {
namespace {

using nlohmann::json;

Choice Flip(Choice choice) {
  switch (choice) {
    case Choice::kA:
      return Choice::kB;
    case Choice::kB:
      return Choice::kA;
    case Choice::kNotSure:
      return Choice::kNotSure;
  }
  return choice;
}

}  // namespace

Clock SystemClock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

bool IsValidRaterId(const std::string& rater_id) {
  if (rater_id.empty() || rater_id.size() > 64) return false;
  return std::all_of(rater_id.begin(), rater_id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

AnnotationService::AnnotationService(std::vector<CaptionPair> pairs, std::string log_path,
                                     AnnotationOptions options, Clock clock)
    : pairs_(std::move(pairs)),
      log_path_(std::move(log_path)),
      options_(std::move(options)),
      clock_(std::move(clock)),
      rng_(options_.seed) {
  if (options_.raters_per_pair < 1) {
    throw std::invalid_argument("raters_per_pair must be at least 1");
  }
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (!pair_index_.emplace(pairs_[i].pair_id, i).second) {
      throw std::invalid_argument("duplicate pair_id " + pairs_[i].pair_id);
    }
  }
  pair_state_.resize(pairs_.size());
  Replay();
  log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (log_fd_ < 0) {
    throw std::runtime_error("cannot open judgment log " + log_path_ + ": " +
                             std::strerror(errno));
  }
}

AnnotationService::~AnnotationService() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

bool AnnotationService::IsFull(std::size_t pair_index) const {
  return static_cast<int>(pair_state_[pair_index].judgments.size()) >=
         options_.raters_per_pair;
}

bool AnnotationService::KnownRater(const std::string& rater_id) const {
  if (!IsValidRaterId(rater_id)) return false;
  return !options_.allowed_raters || options_.allowed_raters->contains(rater_id);
}

DisplayedPair AnnotationService::Display(std::size_t pair_index, const std::string& rater_id,
                                         const Assignment& assignment) const {
  const CaptionPair& pair = pairs_[pair_index];
  DisplayedPair shown;
  shown.pair_id = pair.pair_id;
  shown.audio_id = pair.audio_id;
  shown.caption_a = assignment.swapped ? pair.caption_b.text : pair.caption_a.text;
  shown.caption_b = assignment.swapped ? pair.caption_a.text : pair.caption_b.text;
  shown.judged = raters_.at(rater_id).completed;
  shown.available = static_cast<int>(pairs_.size());
  return shown;
}

void AnnotationService::ApplyAssign(std::size_t pair_index, const std::string& rater_id,
                                    bool swapped, std::int64_t issued_at) {
  raters_[rater_id].assignments[pair_index] = {swapped, issued_at, false};
  ++pair_state_[pair_index].open;
}

void AnnotationService::ApplyJudgment(std::size_t pair_index, const std::string& rater_id,
                                      Choice canonical, std::int64_t timestamp) {
  RaterState& rater = raters_[rater_id];
  rater.assignments.at(pair_index).completed = true;
  ++rater.completed;
  PairState& state = pair_state_[pair_index];
  --state.open;
  state.judgments[rater_id] = {pairs_[pair_index].pair_id, rater_id, canonical, timestamp};
}

void AnnotationService::Replay() {
  if (!std::filesystem::exists(log_path_)) return;
  std::string contents = ReadFileOrThrow(log_path_);
  // A crash can leave a torn final line; everything before it was committed.
  const auto last_newline = contents.rfind('\n');
  const std::size_t committed = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (committed != contents.size()) {
    std::filesystem::resize_file(log_path_, committed);
    contents.resize(committed);
  }
  std::istringstream in(contents);
  ForEachJsonLine(in, log_path_, [&](const json& j, std::size_t line) {
    const std::string event = j.at("event").get<std::string>();
    const std::string pair_id = j.at("pair_id").get<std::string>();
    const std::string rater_id = j.at("rater_id").get<std::string>();
    auto it = pair_index_.find(pair_id);
    if (it == pair_index_.end()) {
      throw FormatError(log_path_, line, "log refers to unknown pair_id " + pair_id);
    }
    const std::size_t index = it->second;
    auto rater = raters_.find(rater_id);
    const bool assigned = rater != raters_.end() && rater->second.assignments.contains(index);
    if (event == "assign") {
      if (assigned) throw FormatError(log_path_, line, "pair assigned twice to " + rater_id);
      ApplyAssign(index, rater_id, j.at("swapped").get<bool>(),
                  j.at("issued_at").get<std::int64_t>());
    } else if (event == "judgment") {
      if (!assigned || rater->second.assignments.at(index).completed || IsFull(index)) {
        throw FormatError(log_path_, line, "judgment without a live assignment");
      }
      const auto choice = ParseChoice(j.at("choice").get<std::string>());
      if (!choice) throw FormatError(log_path_, line, "unknown choice");
      ApplyJudgment(index, rater_id, *choice, j.at("timestamp").get<std::int64_t>());
    } else {
      throw FormatError(log_path_, line, "unknown event \"" + event + "\"");
    }
  });
}

void AnnotationService::Append(const std::string& line) {
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(log_fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("judgment log write failed: " +
                               std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(log_fd_) != 0) {
    throw std::runtime_error("judgment log fsync failed: " +
                             std::string(std::strerror(errno)));
  }
}

NextResult AnnotationService::NextPair(const std::string& rater_id) {
  if (!KnownRater(rater_id)) return {NextStatus::kUnknownRater, std::nullopt};
  std::unique_lock lock(mu_);
  RaterState& rater = raters_[rater_id];
  for (const auto& [index, assignment] : rater.assignments) {
    if (!assignment.completed && !IsFull(index)) {
      return {NextStatus::kAssigned, Display(index, rater_id, assignment)};
    }
  }

  std::optional<std::size_t> best;
  std::tuple<std::size_t, int> best_key;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (rater.assignments.contains(i) || IsFull(i)) continue;
    const std::tuple<std::size_t, int> key{pair_state_[i].judgments.size(),
                                           pair_state_[i].open};
    if (!best || key < best_key) {
      best = i;
      best_key = key;
    }
  }
  if (!best) return {NextStatus::kExhausted, std::nullopt};

  const bool swapped = rng_.Bernoulli(0.5);
  const std::int64_t now = clock_();
  Append(ToJsonLine({{"event", "assign"},
                     {"pair_id", pairs_[*best].pair_id},
                     {"rater_id", rater_id},
                     {"swapped", swapped},
                     {"issued_at", now}}));
  ApplyAssign(*best, rater_id, swapped, now);
  return {NextStatus::kAssigned, Display(*best, rater_id, rater.assignments.at(*best))};
}

SubmitStatus AnnotationService::Submit(const std::string& pair_id, const std::string& rater_id,
                                       Choice display_choice) {
  if (!KnownRater(rater_id)) return SubmitStatus::kUnknownRater;
  std::unique_lock lock(mu_);
  auto pair = pair_index_.find(pair_id);
  if (pair == pair_index_.end()) return SubmitStatus::kUnknownPair;
  const std::size_t index = pair->second;
  auto rater = raters_.find(rater_id);
  if (rater == raters_.end()) return SubmitStatus::kNoOpenAssignment;
  auto assignment = rater->second.assignments.find(index);
  if (assignment == rater->second.assignments.end()) return SubmitStatus::kNoOpenAssignment;
  if (assignment->second.completed) return SubmitStatus::kDuplicate;
  if (IsFull(index)) return SubmitStatus::kLateSubmission;

  const Choice canonical = assignment->second.swapped ? Flip(display_choice) : display_choice;
  const std::int64_t now = clock_();
  Append(ToJsonLine({{"event", "judgment"},
                     {"pair_id", pair_id},
                     {"rater_id", rater_id},
                     {"choice", ChoiceName(canonical)},
                     {"display_choice", ChoiceName(display_choice)},
                     {"timestamp", now}}));
  ApplyJudgment(index, rater_id, canonical, now);
  return SubmitStatus::kAccepted;
}

AnnotationStats AnnotationService::Stats() const {
  std::shared_lock lock(mu_);
  AnnotationStats stats;
  stats.pairs_total = static_cast<int>(pairs_.size());
  stats.raters = static_cast<int>(raters_.size());
  for (PairCategory c : kAllCategories) stats.categories[c] = {};
  std::vector<std::vector<int>> counts;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& judgments = pair_state_[i].judgments;
    CategoryProgress& progress = stats.categories[pairs_[i].category];
    ++progress.pairs;
    progress.judgments += static_cast<int>(judgments.size());
    stats.judgments += static_cast<int>(judgments.size());
    if (!IsFull(i)) continue;
    ++progress.complete;
    ++stats.pairs_complete;
    std::vector<int> row(3, 0);
    for (const auto& [rater, j] : judgments) ++row[static_cast<std::size_t>(j.choice)];
    counts.push_back(std::move(row));
  }
  if (!counts.empty() && options_.raters_per_pair >= 2) stats.kappa = FleissKappa(counts);
  return stats;
}

std::vector<Judgment> AnnotationService::Export() const {
  std::shared_lock lock(mu_);
  std::vector<Judgment> out;
  for (const auto& state : pair_state_) {
    for (const auto& [rater, j] : state.judgments) out.push_back(j);
  }
  std::sort(out.begin(), out.end(), [](const Judgment& x, const Judgment& y) {
    return std::tie(x.pair_id, x.rater_id) < std::tie(y.pair_id, y.rater_id);
  });
  return out;
}

std::string AnnotationService::ExportJsonl() const { return FormatJudgments(Export()); }

}  // namespace fense
