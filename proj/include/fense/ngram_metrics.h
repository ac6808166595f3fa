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

#ifndef FENSE_NGRAM_METRICS_H_
#define FENSE_NGRAM_METRICS_H_

#include <array>
#include <map>
#include <vector>

#include "fense/metric.h"
#include "fense/textproc.h"

namespace fense {

inline constexpr double kBleuPrecisionFloor = 1e-9;
inline constexpr double kRougeBeta = 1.2;
inline constexpr double kMeteorAlpha = 0.9;
inline constexpr double kMeteorBeta = 3.0;
inline constexpr double kMeteorGamma = 0.5;
inline constexpr double kCiderSigma = 6.0;
inline constexpr int kCiderMaxN = 4;

// Sentence-level BLEU with clipped counts and the closest-reference brevity
// penalty. Orders for which the candidate has no n-grams contribute a
// precision of one; a zero precision is floored at kBleuPrecisionFloor.
// Returns 0 for an empty candidate. max_n must be 1 or 4.
double Bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
            int max_n);

// LCS-based F-measure with beta = 1.2, maximised over references.
double RougeL(const TokenSeq& candidate,
              const std::vector<TokenSeq>& references);

// METEOR with exact and Porter-stem matching tiers only.
double Meteor(const TokenSeq& candidate,
              const std::vector<TokenSeq>& references);

// Document frequencies of reference n-grams (n = 1..4) over a corpus of
// items. Immutable once built.
class CiderCorpusStats {
 public:
  // One entry per corpus item: that item's reference set. Throws
  // std::invalid_argument for fewer than two items or an empty reference set.
  static CiderCorpusStats FromReferenceSets(
      const std::vector<std::vector<TokenSeq>>& reference_sets);

  int num_items() const { return num_items_; }
  // Number of items whose reference set contains `gram` (0 when unseen).
  int DocFreq(const NGram& gram) const;

 private:
  int num_items_ = 0;
  std::array<std::map<NGram, int>, kCiderMaxN> doc_freq_;
};

// CIDEr-D of one candidate under fixed corpus statistics, in [0, 10].
double CiderD(const CiderCorpusStats& stats, const TokenSeq& candidate,
              const std::vector<TokenSeq>& references);

struct CiderItem {
  TokenSeq candidate;
  std::vector<TokenSeq> references;
};

// Builds corpus statistics from the items' references and scores every item.
std::vector<double> CiderD(const std::vector<CiderItem>& items);

// SentenceMetric adapters that tokenize their inputs.
SentenceMetric MakeBleuMetric(int max_n);
SentenceMetric MakeRougeLMetric();
SentenceMetric MakeMeteorMetric();
SentenceMetric MakeCiderDMetric(CiderCorpusStats stats);

}  // namespace fense

#endif  // FENSE_NGRAM_METRICS_H_
