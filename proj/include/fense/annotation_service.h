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

#ifndef FENSE_ANNOTATION_SERVICE_H_
#define FENSE_ANNOTATION_SERVICE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "fense/benchmark.h"
#include "fense/random.h"

namespace fense {

// Milliseconds since the epoch; injectable for tests.
using Clock = std::function<std::int64_t()>;
Clock SystemClock();

struct AnnotationOptions {
  int raters_per_pair = 4;
  // When set, only these rater ids are accepted. Otherwise any id made of
  // [A-Za-z0-9._-] (1 to 64 characters) registers on first use.
  std::optional<std::set<std::string>> allowed_raters;
  // Seeds the display-side permutation.
  std::uint64_t seed = 1;
};

bool IsValidRaterId(const std::string& rater_id);

// A pair as shown to a rater, in display order.
struct DisplayedPair {
  std::string pair_id;
  std::string audio_id;
  std::string caption_a;
  std::string caption_b;
  // The rater's completed judgments and the total number of pairs.
  int judged = 0;
  int available = 0;
};

enum class NextStatus { kAssigned, kExhausted, kUnknownRater };

struct NextResult {
  NextStatus status = NextStatus::kExhausted;
  std::optional<DisplayedPair> pair;
};

enum class SubmitStatus {
  kAccepted,
  kUnknownRater,
  kUnknownPair,
  kDuplicate,
  kNoOpenAssignment,
  kLateSubmission,
};

struct CategoryProgress {
  int pairs = 0;
  int complete = 0;
  int judgments = 0;
};

struct AnnotationStats {
  int pairs_total = 0;
  int pairs_complete = 0;
  int judgments = 0;
  int raters = 0;
  // Absent until a pair has raters_per_pair judgments.
  std::optional<KappaResult> kappa;
  std::map<PairCategory, CategoryProgress> categories;
};

// Assigns pairs to raters and records their judgments in an append-only JSONL
// log (`log_path`), which is replayed on construction. Issuing assignments
// and accepting judgments are serialized; stats and export take a shared lock.
class AnnotationService {
 public:
  AnnotationService(std::vector<CaptionPair> pairs, std::string log_path,
                    AnnotationOptions options, Clock clock = SystemClock());
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Returns the rater's open assignment if one is still live, otherwise issues
  // the eligible pair with the fewest completed judgments (then fewest open
  // assignments, then file order).
  NextResult NextPair(const std::string& rater_id);

  // `display_choice` refers to the sides as they were shown; it is mapped back
  // to the canonical sides before it is stored.
  SubmitStatus Submit(const std::string& pair_id, const std::string& rater_id,
                      Choice display_choice);

  AnnotationStats Stats() const;

  // Canonical-side judgments ordered by (pair_id, rater_id).
  std::vector<Judgment> Export() const;
  std::string ExportJsonl() const;

  const std::vector<CaptionPair>& pairs() const { return pairs_; }
  int raters_per_pair() const { return options_.raters_per_pair; }

 private:
  struct Assignment {
    bool swapped = false;
    std::int64_t issued_at = 0;
    bool completed = false;
  };
  struct PairState {
    std::map<std::string, Judgment> judgments;  // rater -> canonical judgment
    int open = 0;
  };
  struct RaterState {
    std::map<std::size_t, Assignment> assignments;  // pair index -> assignment
    int completed = 0;
  };

  bool IsFull(std::size_t pair_index) const;
  bool KnownRater(const std::string& rater_id) const;
  DisplayedPair Display(std::size_t pair_index, const std::string& rater_id,
                        const Assignment& assignment) const;
  void ApplyAssign(std::size_t pair_index, const std::string& rater_id,
                   bool swapped, std::int64_t issued_at);
  void ApplyJudgment(std::size_t pair_index, const std::string& rater_id,
                     Choice canonical, std::int64_t timestamp);
  void Replay();
  void Append(const std::string& line);

  std::vector<CaptionPair> pairs_;
  std::map<std::string, std::size_t> pair_index_;
  std::string log_path_;
  AnnotationOptions options_;
  Clock clock_;
  Rng rng_;
  int log_fd_ = -1;

  mutable std::shared_mutex mu_;
  std::vector<PairState> pair_state_;
  std::map<std::string, RaterState> raters_;
};

struct AnnotationServerOptions {
  // audio_id -> file served by GET /api/audio/{audio_id}.
  std::map<std::string, std::string> audio_files;
  // Mounted at "/" when non-empty (the browser client).
  std::string static_dir;
};

// HTTP front end:
//   GET  /api/pairs/next?rater=ID   200 pair | 204 | 400 | 404
//   POST /api/judgments             {pair_id, rater_id, choice}
//                                   200 | 400 | 404 | 409 | 410
//   GET  /api/stats
//   GET  /api/export                JSONL
//   GET  /api/audio/{audio_id}
class AnnotationServer {
 public:
  AnnotationServer(AnnotationService& service, AnnotationServerOptions options);
  ~AnnotationServer();

  // Binds an ephemeral port and returns it, or -1.
  int BindToAnyPort(const std::string& host);
  bool Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string AudioContentType(const std::string& path);

}  // namespace fense

#endif  // FENSE_ANNOTATION_SERVICE_H_
