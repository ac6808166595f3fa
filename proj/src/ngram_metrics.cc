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

#include "fense/ngram_metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace fense {
namespace {

void RequireReferences(const auto& references, const char* metric) {
  if (references.empty()) {
    throw std::invalid_argument(std::string(metric) +
                                ": at least one reference is required");
  }
}

// Reference length closest to `candidate_length`; ties go to the shorter.
std::size_t ClosestReferenceLength(std::size_t candidate_length,
                                   const std::vector<TokenSeq>& references) {
  std::size_t best = references.front().size();
  for (const auto& ref : references) {
    const auto distance = [&](std::size_t len) {
      return len > candidate_length ? len - candidate_length
                                    : candidate_length - len;
    };
    const std::size_t d = distance(ref.size()), best_d = distance(best);
    if (d < best_d || (d == best_d && ref.size() < best)) best = ref.size();
  }
  return best;
}

struct Alignment {
  int matches = 0;
  int chunks = 0;
};

Alignment AlignForMeteor(const TokenSeq& candidate, const TokenSeq& reference) {
  std::vector<int> align(candidate.size(), -1);
  std::vector<bool> used(reference.size(), false);

  const auto run_tier = [&](const std::vector<std::string>& cand_keys,
                            const std::vector<std::string>& ref_keys) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (align[i] >= 0) continue;
      int chosen = -1;
      // Prefer the reference slot that extends the previous match.
      if (i > 0 && align[i - 1] >= 0) {
        const std::size_t next = static_cast<std::size_t>(align[i - 1]) + 1;
        if (next < reference.size() && !used[next] &&
            ref_keys[next] == cand_keys[i]) {
          chosen = static_cast<int>(next);
        }
      }
      for (std::size_t j = 0; chosen < 0 && j < reference.size(); ++j) {
        if (!used[j] && ref_keys[j] == cand_keys[i]) chosen = static_cast<int>(j);
      }
      if (chosen >= 0) {
        align[i] = chosen;
        used[static_cast<std::size_t>(chosen)] = true;
      }
    }
  };

  run_tier(candidate, reference);
  std::vector<std::string> cand_stems, ref_stems;
  for (const auto& t : candidate) cand_stems.push_back(Stem(t));
  for (const auto& t : reference) ref_stems.push_back(Stem(t));
  run_tier(cand_stems, ref_stems);

  Alignment result;
  int prev_cand = -2, prev_ref = -2;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (align[i] < 0) continue;
    ++result.matches;
    const int cand_pos = static_cast<int>(i);
    if (cand_pos != prev_cand + 1 || align[i] != prev_ref + 1) ++result.chunks;
    prev_cand = cand_pos;
    prev_ref = align[i];
  }
  return result;
}

double MeteorSingle(const TokenSeq& candidate, const TokenSeq& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const Alignment alignment = AlignForMeteor(candidate, reference);
  if (alignment.matches == 0) return 0.0;
  const double m = alignment.matches;
  const double precision = m / static_cast<double>(candidate.size());
  const double recall = m / static_cast<double>(reference.size());
  const double fmean = precision * recall /
                       (kMeteorAlpha * precision + (1.0 - kMeteorAlpha) * recall);
  const double penalty =
      kMeteorGamma * std::pow(alignment.chunks / m, kMeteorBeta);
  return fmean * (1.0 - penalty);
}

// TF-IDF vectors of one sentence for n = 1..4.
struct CiderVector {
  std::array<std::map<NGram, double>, kCiderMaxN> weights;
  std::array<double, kCiderMaxN> norms{};
  std::size_t length = 0;
};

CiderVector ToCiderVector(const CiderCorpusStats& stats, const TokenSeq& seq) {
  CiderVector vec;
  vec.length = seq.size();
  const double log_items = std::log(static_cast<double>(stats.num_items()));
  for (int n = 1; n <= kCiderMaxN; ++n) {
    auto& weights = vec.weights[static_cast<std::size_t>(n - 1)];
    double squared = 0.0;
    for (const auto& [gram, count] : NGrams(seq, n).counts) {
      const double df = std::max(1.0, static_cast<double>(stats.DocFreq(gram)));
      const double value = count * (log_items - std::log(df));
      weights.emplace(gram, value);
      squared += value * value;
    }
    vec.norms[static_cast<std::size_t>(n - 1)] = std::sqrt(squared);
  }
  return vec;
}

std::array<double, kCiderMaxN> CiderSimilarity(const CiderVector& hyp,
                                               const CiderVector& ref) {
  std::array<double, kCiderMaxN> result{};
  const double delta =
      static_cast<double>(hyp.length) - static_cast<double>(ref.length);
  const double length_penalty =
      std::exp(-(delta * delta) / (2.0 * kCiderSigma * kCiderSigma));
  for (std::size_t n = 0; n < kCiderMaxN; ++n) {
    double value = 0.0;
    for (const auto& [gram, hyp_weight] : hyp.weights[n]) {
      auto it = ref.weights[n].find(gram);
      if (it == ref.weights[n].end()) continue;
      value += std::min(hyp_weight, it->second) * it->second;
    }
    if (hyp.norms[n] != 0.0 && ref.norms[n] != 0.0) {
      value /= hyp.norms[n] * ref.norms[n];
    }
    result[n] = value * length_penalty;
  }
  return result;
}

}  // namespace

double Bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
            int max_n) {
  RequireReferences(references, "bleu");
  if (max_n != 1 && max_n != 4) {
    throw std::invalid_argument("bleu: max_n must be 1 or 4");
  }
  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const NGramMultiset cand_grams = NGrams(candidate, n);
    const int total = cand_grams.Total();
    if (total == 0) continue;
    std::vector<NGramMultiset> ref_grams;
    for (const auto& ref : references) ref_grams.push_back(NGrams(ref, n));
    int clipped = 0;
    for (const auto& [gram, count] : cand_grams.counts) {
      int max_ref = 0;
      for (const auto& rg : ref_grams) max_ref = std::max(max_ref, rg.Count(gram));
      clipped += std::min(count, max_ref);
    }
    double precision = static_cast<double>(clipped) / total;
    if (precision == 0.0) precision = kBleuPrecisionFloor;
    log_sum += std::log(precision) / max_n;
  }

  const double c = static_cast<double>(candidate.size());
  const double r =
      static_cast<double>(ClosestReferenceLength(candidate.size(), references));
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_sum);
}

double RougeL(const TokenSeq& candidate,
              const std::vector<TokenSeq>& references) {
  RequireReferences(references, "rouge_l");
  double best = 0.0;
  const double beta2 = kRougeBeta * kRougeBeta;
  for (const auto& ref : references) {
    if (candidate.empty() || ref.empty()) continue;
    const int lcs = LcsLength(candidate, ref);
    if (lcs == 0) continue;
    const double precision = static_cast<double>(lcs) / candidate.size();
    const double recall = static_cast<double>(lcs) / ref.size();
    const double f =
        (1.0 + beta2) * precision * recall / (recall + beta2 * precision);
    best = std::max(best, f);
  }
  return best;
}

double Meteor(const TokenSeq& candidate,
              const std::vector<TokenSeq>& references) {
  RequireReferences(references, "meteor");
  double best = 0.0;
  for (const auto& ref : references) {
    best = std::max(best, MeteorSingle(candidate, ref));
  }
  return best;
}

CiderCorpusStats CiderCorpusStats::FromReferenceSets(
    const std::vector<std::vector<TokenSeq>>& reference_sets) {
  if (reference_sets.size() < 2) {
    throw std::invalid_argument("cider_d: at least two corpus items required");
  }
  CiderCorpusStats stats;
  stats.num_items_ = static_cast<int>(reference_sets.size());
  for (const auto& refs : reference_sets) {
    RequireReferences(refs, "cider_d");
    for (int n = 1; n <= kCiderMaxN; ++n) {
      std::set<NGram> seen;
      for (const auto& ref : refs) {
        for (const auto& [gram, count] : NGrams(ref, n).counts) seen.insert(gram);
      }
      auto& df = stats.doc_freq_[static_cast<std::size_t>(n - 1)];
      for (const auto& gram : seen) ++df[gram];
    }
  }
  return stats;
}

int CiderCorpusStats::DocFreq(const NGram& gram) const {
  if (gram.empty() || gram.size() > kCiderMaxN) return 0;
  const auto& df = doc_freq_[gram.size() - 1];
  auto it = df.find(gram);
  return it == df.end() ? 0 : it->second;
}

double CiderD(const CiderCorpusStats& stats, const TokenSeq& candidate,
              const std::vector<TokenSeq>& references) {
  RequireReferences(references, "cider_d");
  const CiderVector hyp = ToCiderVector(stats, candidate);
  std::array<double, kCiderMaxN> sums{};
  for (const auto& ref : references) {
    const auto sim = CiderSimilarity(hyp, ToCiderVector(stats, ref));
    for (std::size_t n = 0; n < kCiderMaxN; ++n) sums[n] += sim[n];
  }
  double mean = 0.0;
  for (double s : sums) mean += s;
  mean /= kCiderMaxN;
  return mean / static_cast<double>(references.size()) * 10.0;
}

std::vector<double> CiderD(const std::vector<CiderItem>& items) {
  if (items.size() < 2) {
    throw std::invalid_argument("cider_d: at least two corpus items required");
  }
  std::vector<std::vector<TokenSeq>> reference_sets;
  reference_sets.reserve(items.size());
  for (const auto& item : items) reference_sets.push_back(item.references);
  const CiderCorpusStats stats = CiderCorpusStats::FromReferenceSets(reference_sets);
  std::vector<double> scores;
  scores.reserve(items.size());
  for (const auto& item : items) {
    scores.push_back(CiderD(stats, item.candidate, item.references));
  }
  return scores;
}

namespace {

std::vector<TokenSeq> TokenizeAll(const std::vector<std::string>& texts) {
  std::vector<TokenSeq> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(Tokenize(t));
  return out;
}

}  // namespace

SentenceMetric MakeBleuMetric(int max_n) {
  if (max_n != 1 && max_n != 4) {
    throw std::invalid_argument("bleu: max_n must be 1 or 4");
  }
  return [max_n](const std::string& candidate,
                 const std::vector<std::string>& references) {
    return Bleu(Tokenize(candidate), TokenizeAll(references), max_n);
  };
}

SentenceMetric MakeRougeLMetric() {
  return [](const std::string& candidate,
            const std::vector<std::string>& references) {
    return RougeL(Tokenize(candidate), TokenizeAll(references));
  };
}

SentenceMetric MakeMeteorMetric() {
  return [](const std::string& candidate,
            const std::vector<std::string>& references) {
    return Meteor(Tokenize(candidate), TokenizeAll(references));
  };
}

SentenceMetric MakeCiderDMetric(CiderCorpusStats stats) {
  return [stats = std::move(stats)](const std::string& candidate,
                                    const std::vector<std::string>& references) {
    return CiderD(stats, Tokenize(candidate), TokenizeAll(references));
  };
}

}  // namespace fense
