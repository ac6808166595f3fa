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

#include "fense/benchmark.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "fense/errors.h"
#include "fense/random.h"

namespace fense {
namespace {

struct Candidate {
  Caption a;
  Caption b;
  double similarity;
};

// Filters out candidates above the similarity ceiling and samples up to
// `count` survivors (kept in candidate order). Falls back to the single least
// similar candidate when nothing survives.
std::vector<std::pair<Candidate, bool>> SelectCandidates(
    const std::vector<Candidate>& candidates, std::size_t count, Rng& rng) {
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].similarity <= kPairSimilarityCeiling) survivors.push_back(i);
  }
  std::vector<std::pair<Candidate, bool>> out;
  if (survivors.empty()) {
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (candidates[i].similarity < candidates[lowest].similarity) lowest = i;
    }
    out.emplace_back(candidates[lowest], true);
    return out;
  }
  if (survivors.size() > count) {
    rng.Shuffle(std::span<std::size_t>(survivors));
    survivors.resize(count);
    std::sort(survivors.begin(), survivors.end());
  }
  for (std::size_t i : survivors) out.emplace_back(candidates[i], false);
  return out;
}

CaptionPair MakePair(std::string pair_id, const std::string& audio_id,
                     PairCategory category, Candidate candidate, bool fallback,
                     Rng& rng) {
  CaptionPair pair;
  pair.pair_id = std::move(pair_id);
  pair.audio_id = audio_id;
  pair.category = category;
  pair.similarity_fallback = fallback;
  pair.caption_a = std::move(candidate.a);
  pair.caption_b = std::move(candidate.b);
  if (rng.Bernoulli(0.5)) std::swap(pair.caption_a, pair.caption_b);
  return pair;
}

Caption HumanCaption(const std::string& text, const std::string& audio_id) {
  return Caption{text, std::string(kHumanSource), audio_id, std::nullopt};
}

std::size_t FindReference(const AudioEntry& entry, const std::string& text,
                          const CaptionPair& pair) {
  auto it = std::find(entry.references.begin(), entry.references.end(), text);
  if (it == entry.references.end()) {
    throw ProtocolError("pair " + pair.pair_id + ": caption \"" + text +
                        "\" is not a reference of audio " + entry.audio_id);
  }
  return static_cast<std::size_t>(it - entry.references.begin());
}

std::vector<std::string> WithoutIndex(const std::vector<std::string>& refs,
                                      std::size_t skip) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i != skip) out.push_back(refs[i]);
  }
  return out;
}

double MeanScore(const SentenceMetric& metric, const std::string& candidate,
                 const std::vector<std::vector<std::string>>& sets) {
  double sum = 0.0;
  for (const auto& refs : sets) sum += metric(candidate, refs);
  return sum / static_cast<double>(sets.size());
}

std::unordered_map<std::string, const AudioEntry*> IndexDataset(
    const std::vector<AudioEntry>& dataset) {
  std::unordered_map<std::string, const AudioEntry*> index;
  for (const auto& entry : dataset) {
    if (!index.emplace(entry.audio_id, &entry).second) {
      throw std::invalid_argument("duplicate audio_id " + entry.audio_id);
    }
  }
  return index;
}

}  // namespace

std::string_view CategoryName(PairCategory category) {
  switch (category) {
    case PairCategory::kHC:
      return "HC";
    case PairCategory::kHI:
      return "HI";
    case PairCategory::kHM:
      return "HM";
    case PairCategory::kMM:
      return "MM";
  }
  return "";
}

std::optional<PairCategory> ParseCategory(std::string_view name) {
  for (PairCategory c : kAllCategories) {
    if (CategoryName(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view ChoiceName(Choice choice) {
  switch (choice) {
    case Choice::kA:
      return "A";
    case Choice::kB:
      return "B";
    case Choice::kNotSure:
      return "NotSure";
  }
  return "";
}

std::optional<Choice> ParseChoice(std::string_view name) {
  if (name == "A") return Choice::kA;
  if (name == "B") return Choice::kB;
  if (name == "NotSure") return Choice::kNotSure;
  return std::nullopt;
}

PairGenerationResult GeneratePairs(
    const std::vector<AudioEntry>& dataset,
    const std::map<std::string, std::vector<Caption>>& machine_captions,
    const EmbeddingProvider& provider, std::uint64_t seed) {
  IndexDataset(dataset);
  PairGenerationResult result;
  result.provider = provider.Describe();
  Rng rng(seed);

  const auto similarity = [&](const std::string& x, const std::string& y) {
    const auto vectors = provider.EmbedBatch({x, y});
    return Cosine(vectors[0], vectors[1]);
  };

  for (std::size_t e = 0; e < dataset.size(); ++e) {
    const AudioEntry& entry = dataset[e];
    const auto& refs = entry.references;
    auto machine_it = machine_captions.find(entry.audio_id);
    std::vector<Caption> machine;
    if (machine_it != machine_captions.end()) {
      for (const auto& c : machine_it->second) {
        const bool duplicate = std::any_of(machine.begin(), machine.end(),
                                           [&](const Caption& m) { return m.text == c.text; });
        if (!duplicate) machine.push_back(c);
      }
    }
    if (refs.size() < 2) {
      result.skipped[entry.audio_id] = "fewer than 2 references";
      continue;
    }
    if (machine.size() < 2) {
      result.skipped[entry.audio_id] = "fewer than 2 distinct machine captions";
      continue;
    }
    if (dataset.size() < 2) {
      result.skipped[entry.audio_id] = "no other audio to draw an HI caption from";
      continue;
    }
    const std::string& id = entry.audio_id;
    const Caption correct = HumanCaption(refs.front(), id);

    std::vector<Candidate> hc;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      for (std::size_t j = i + 1; j < refs.size(); ++j) {
        hc.push_back({HumanCaption(refs[i], id), HumanCaption(refs[j], id),
                      similarity(refs[i], refs[j])});
      }
    }
    auto hc_pick = SelectCandidates(hc, 1, rng);
    result.pairs.push_back(MakePair(id + "/HC", id, PairCategory::kHC,
                                    hc_pick.front().first, hc_pick.front().second, rng));

    std::size_t other = rng.Uniform(dataset.size() - 1);
    if (other >= e) ++other;
    const AudioEntry& mismatched = dataset[other];
    const std::string& wrong =
        mismatched.references[rng.Uniform(mismatched.references.size())];
    result.pairs.push_back(MakePair(
        id + "/HI", id, PairCategory::kHI,
        {correct, HumanCaption(wrong, mismatched.audio_id), similarity(correct.text, wrong)},
        false, rng));

    std::vector<Candidate> hm;
    for (const auto& m : machine) {
      if (m.text == correct.text) continue;
      hm.push_back({correct, m, similarity(correct.text, m.text)});
    }
    if (!hm.empty()) {
      auto hm_pick = SelectCandidates(hm, 1, rng);
      result.pairs.push_back(MakePair(id + "/HM", id, PairCategory::kHM,
                                      hm_pick.front().first, hm_pick.front().second,
                                      rng));
    }

    std::vector<Candidate> mm;
    for (std::size_t i = 0; i < machine.size(); ++i) {
      for (std::size_t j = i + 1; j < machine.size(); ++j) {
        mm.push_back({machine[i], machine[j], similarity(machine[i].text, machine[j].text)});
      }
    }
    const auto mm_picks = SelectCandidates(mm, kMaxMachinePairsPerAudio, rng);
    for (std::size_t k = 0; k < mm_picks.size(); ++k) {
      result.pairs.push_back(MakePair(id + "/MM" + std::to_string(k + 1), id,
                                      PairCategory::kMM, mm_picks[k].first,
                                      mm_picks[k].second, rng));
    }
  }
  return result;
}

Gold GoldFromJudgments(std::span<const Choice> choices) {
  int a = 0, b = 0;
  for (Choice c : choices) {
    if (c == Choice::kA) ++a;
    if (c == Choice::kB) ++b;
  }
  if (a > b) return Gold::kA;
  if (b > a) return Gold::kB;
  return Gold::kExcluded;
}

Gold GoldFromJudgments(std::span<const Judgment> judgments) {
  std::vector<Choice> choices;
  choices.reserve(judgments.size());
  for (const auto& j : judgments) choices.push_back(j.choice);
  return GoldFromJudgments(choices);
}

EvalReferences EvalReferencesFor(const CaptionPair& pair, const AudioEntry& entry) {
  if (pair.audio_id != entry.audio_id) {
    throw ProtocolError("pair " + pair.pair_id + " belongs to audio " +
                        pair.audio_id + ", not " + entry.audio_id);
  }
  const auto& refs = entry.references;
  if (refs.size() < 2) {
    throw ProtocolError("audio " + entry.audio_id +
                        " needs at least 2 references for leave-one-out scoring");
  }
  EvalReferences out;
  switch (pair.category) {
    case PairCategory::kHC:
      out.side_a = {WithoutIndex(refs, FindReference(entry, pair.caption_a.text, pair))};
      out.side_b = {WithoutIndex(refs, FindReference(entry, pair.caption_b.text, pair))};
      break;
    case PairCategory::kHI:
    case PairCategory::kHM: {
      const auto is_correct = [&](const Caption& c) {
        return c.is_human() && (c.audio_id.empty() || c.audio_id == entry.audio_id);
      };
      const Caption* correct = is_correct(pair.caption_a)   ? &pair.caption_a
                               : is_correct(pair.caption_b) ? &pair.caption_b
                                                            : nullptr;
      if (correct == nullptr) {
        throw ProtocolError("pair " + pair.pair_id +
                            " has no human caption of its own audio");
      }
      out.side_a = {WithoutIndex(refs, FindReference(entry, correct->text, pair))};
      out.side_b = out.side_a;
      break;
    }
    case PairCategory::kMM:
      for (std::size_t skip = 0; skip < refs.size(); ++skip) {
        out.side_a.push_back(WithoutIndex(refs, skip));
      }
      out.side_b = out.side_a;
      break;
  }
  return out;
}

Decision MetricPairDecision(const SentenceMetric& metric, const CaptionPair& pair,
                            const AudioEntry& entry) {
  const EvalReferences sets = EvalReferencesFor(pair, entry);
  const double a = MeanScore(metric, pair.caption_a.text, sets.side_a);
  const double b = MeanScore(metric, pair.caption_b.text, sets.side_b);
  if (a > b) return Decision::kA;
  if (b > a) return Decision::kB;
  return Decision::kUndecided;
}

std::optional<double> CategoryAccuracy::accuracy() const {
  if (included == 0) return std::nullopt;
  return 100.0 * correct / included;
}

void ValidateBenchmarkInputs(const std::vector<CaptionPair>& pairs,
                             const std::vector<Judgment>& judgments,
                             const std::vector<AudioEntry>& dataset) {
  const auto index = IndexDataset(dataset);
  std::set<std::string> pair_ids;
  for (const auto& pair : pairs) {
    if (!index.contains(pair.audio_id)) {
      throw std::invalid_argument("pair " + pair.pair_id + " refers to unknown audio_id " +
                                  pair.audio_id);
    }
    if (!pair_ids.insert(pair.pair_id).second) {
      throw std::invalid_argument("duplicate pair_id " + pair.pair_id);
    }
  }
  for (const auto& j : judgments) {
    if (!pair_ids.contains(j.pair_id)) {
      throw std::invalid_argument("judgment refers to unknown pair_id " + j.pair_id);
    }
  }
}

BenchmarkReport BenchmarkAgainstGold(const NamedMetric& metric,
                                     const std::vector<CaptionPair>& pairs,
                                     const std::map<std::string, Gold>& gold,
                                     const std::vector<AudioEntry>& dataset) {
  const auto index = IndexDataset(dataset);
  std::vector<const CaptionPair*> ordered;
  ordered.reserve(pairs.size());
  for (const auto& p : pairs) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CaptionPair* x, const CaptionPair* y) {
                     return x->pair_id < y->pair_id;
                   });

  BenchmarkReport report;
  report.metric = metric.name;
  for (PairCategory c : kAllCategories) report.categories[c] = {};
  for (const CaptionPair* pair : ordered) {
    PairRecord record;
    record.pair_id = pair->pair_id;
    record.category = pair->category;
    auto gold_it = gold.find(pair->pair_id);
    if (gold_it == gold.end()) {
      ++report.unjudged;
      report.records.push_back(std::move(record));
      continue;
    }
    record.gold = gold_it->second;
    if (record.gold == Gold::kExcluded) {
      ++report.excluded;
      report.records.push_back(std::move(record));
      continue;
    }
    auto entry_it = index.find(pair->audio_id);
    if (entry_it == index.end()) {
      throw std::invalid_argument("pair " + pair->pair_id +
                                  " refers to unknown audio_id " + pair->audio_id);
    }
    record.decision = MetricPairDecision(metric.score, *pair, *entry_it->second);
    if (record.decision == Decision::kUndecided) ++report.undecided;
    record.correct = record.decision == DecisionFromGold(record.gold);
    auto& cell = report.categories[pair->category];
    ++cell.included;
    ++report.total.included;
    if (record.correct) {
      ++cell.correct;
      ++report.total.correct;
    }
    report.records.push_back(std::move(record));
  }
  return report;
}

BenchmarkReport BenchmarkMetric(const NamedMetric& metric,
                                const std::vector<CaptionPair>& pairs,
                                const std::vector<Judgment>& judgments,
                                const std::vector<AudioEntry>& dataset) {
  std::map<std::string, std::vector<Choice>> votes;
  for (const auto& j : judgments) votes[j.pair_id].push_back(j.choice);
  std::map<std::string, Gold> gold;
  for (const auto& [pair_id, choices] : votes) {
    gold[pair_id] = GoldFromJudgments(choices);
  }
  return BenchmarkAgainstGold(metric, pairs, gold, dataset);
}

Decision DecisionFromGold(Gold gold) {
  switch (gold) {
    case Gold::kA:
      return Decision::kA;
    case Gold::kB:
      return Decision::kB;
    case Gold::kExcluded:
      return Decision::kUndecided;
  }
  return Decision::kUndecided;
}

WinFractionReport WinFractions(const std::vector<CaptionPair>& pairs,
                               const std::map<std::string, Decision>& decisions) {
  WinFractionReport report;
  std::set<std::string> seen;
  for (const auto& pair : pairs) {
    if (pair.category != PairCategory::kMM) continue;
    const std::string& sys_a = pair.caption_a.source;
    const std::string& sys_b = pair.caption_b.source;
    if (sys_a == sys_b) {
      ++report.same_system_pairs;
      continue;
    }
    seen.insert(sys_a);
    seen.insert(sys_b);
    auto it = decisions.find(pair.pair_id);
    if (it == decisions.end() || it->second == Decision::kUndecided) continue;
    auto& a = report.systems[sys_a];
    auto& b = report.systems[sys_b];
    ++a.decided;
    ++b.decided;
    if (it->second == Decision::kA) {
      ++a.wins;
    } else {
      ++b.wins;
    }
  }
  for (const auto& system : seen) {
    if (!report.systems.contains(system)) report.omitted.push_back(system);
  }
  return report;
}

}  // namespace fense
