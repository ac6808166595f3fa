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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "caption_corpus.h"
#include "fense/benchmark.h"
#include "fense/embedding.h"
#include "fense/errors.h"
#include "fense/random.h"

namespace fense {
namespace {

Caption Human(std::string text, std::string audio_id = "") {
  return Caption{std::move(text), "human", std::move(audio_id), std::nullopt};
}

Caption Machine(std::string text, std::string system) {
  return Caption{std::move(text), std::move(system), "", std::nullopt};
}

CaptionPair Pair(std::string id, std::string audio, PairCategory category, Caption a,
                 Caption b) {
  CaptionPair p;
  p.pair_id = std::move(id);
  p.audio_id = std::move(audio);
  p.category = category;
  p.caption_a = std::move(a);
  p.caption_b = std::move(b);
  return p;
}

const AudioEntry kFiveRefs = {
    "clip", {"a dog barks loudly", "a cat meows", "birds chirp", "rain falls hard", "wind blows"},
    std::nullopt};

// ---------------------------------------------------------------- pairs

class GeneratePairsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    audio_ = testsupport::GenerateAudio(40, 5, 71);
    dataset_ = testsupport::Entries(audio_);
    machine_ = testsupport::GenerateMachineCaptions(audio_, 4, 72);
    provider_ = MakeTestEmbedder(kTestEmbedderDefaultDim, 73);
  }

  std::vector<testsupport::SyntheticAudio> audio_;
  std::vector<AudioEntry> dataset_;
  std::map<std::string, std::vector<Caption>> machine_;
  std::shared_ptr<const EmbeddingProvider> provider_;
};

TEST_F(GeneratePairsTest, CategoryCountsAndShapes) {
  const auto result = GeneratePairs(dataset_, machine_, *provider_, 5);
  EXPECT_EQ(result.provider, provider_->Describe());

  std::map<std::string, const AudioEntry*> index;
  for (const auto& e : dataset_) index[e.audio_id] = &e;
  std::map<std::string, std::map<PairCategory, int>> counts;
  std::set<std::string> ids;
  for (const auto& p : result.pairs) {
    EXPECT_TRUE(ids.insert(p.pair_id).second) << p.pair_id;
    EXPECT_NE(p.caption_a.text, p.caption_b.text);
    ++counts[p.audio_id][p.category];
    const auto& refs = index.at(p.audio_id)->references;
    const auto is_ref = [&](const Caption& c) {
      return c.is_human() && std::find(refs.begin(), refs.end(), c.text) != refs.end();
    };
    switch (p.category) {
      case PairCategory::kHC:
        EXPECT_TRUE(is_ref(p.caption_a) && is_ref(p.caption_b));
        break;
      case PairCategory::kHI: {
        const Caption& own = is_ref(p.caption_a) ? p.caption_a : p.caption_b;
        const Caption& other = is_ref(p.caption_a) ? p.caption_b : p.caption_a;
        EXPECT_EQ(own.text, refs.front());
        EXPECT_TRUE(other.is_human());
        EXPECT_NE(other.audio_id, p.audio_id);
        const auto& other_refs = index.at(other.audio_id)->references;
        EXPECT_NE(std::find(other_refs.begin(), other_refs.end(), other.text),
                  other_refs.end());
        break;
      }
      case PairCategory::kHM:
        EXPECT_NE(p.caption_a.is_human(), p.caption_b.is_human());
        EXPECT_EQ((p.caption_a.is_human() ? p.caption_a : p.caption_b).text, refs.front());
        break;
      case PairCategory::kMM:
        EXPECT_FALSE(p.caption_a.is_human());
        EXPECT_FALSE(p.caption_b.is_human());
        break;
    }
  }
  EXPECT_EQ(counts.size(), dataset_.size());
  for (const auto& [audio, by_category] : counts) {
    EXPECT_EQ(by_category.at(PairCategory::kHC), 1) << audio;
    EXPECT_EQ(by_category.at(PairCategory::kHI), 1) << audio;
    EXPECT_EQ(by_category.at(PairCategory::kHM), 1) << audio;
    EXPECT_GE(by_category.at(PairCategory::kMM), 1) << audio;
    EXPECT_LE(by_category.at(PairCategory::kMM), 4) << audio;
  }
}

TEST_F(GeneratePairsTest, SimilarityFilterHoldsForUnflaggedPairs) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto result = GeneratePairs(dataset_, machine_, *provider_, seed);
    for (const auto& p : result.pairs) {
      if (p.category == PairCategory::kHI || p.similarity_fallback) continue;
      const double s = Cosine(provider_->Embed(p.caption_a.text),
                              provider_->Embed(p.caption_b.text));
      EXPECT_LE(s, kPairSimilarityCeiling) << p.pair_id;
    }
  }
}

TEST_F(GeneratePairsTest, DeterministicInSeed) {
  const auto first = GeneratePairs(dataset_, machine_, *provider_, 9);
  const auto second = GeneratePairs(dataset_, machine_, *provider_, 9);
  EXPECT_EQ(first.pairs, second.pairs);
  const auto other = GeneratePairs(dataset_, machine_, *provider_, 10);
  EXPECT_NE(first.pairs, other.pairs);
}

TEST_F(GeneratePairsTest, BothPresentationOrdersOccur) {
  const auto result = GeneratePairs(dataset_, machine_, *provider_, 3);
  int human_first = 0;
  int hm = 0;
  for (const auto& p : result.pairs) {
    if (p.category != PairCategory::kHM) continue;
    ++hm;
    if (p.caption_a.is_human()) ++human_first;
  }
  EXPECT_GT(human_first, 0);
  EXPECT_LT(human_first, hm);
}

TEST(GeneratePairsEdgeTest, PairCountBoundsFor250Audios) {
  const auto audio = testsupport::GenerateAudio(250, 5, 17);
  const auto provider = MakeTestEmbedder(kTestEmbedderDefaultDim, 17);
  const auto result = GeneratePairs(testsupport::Entries(audio),
                                    testsupport::GenerateMachineCaptions(audio, 4, 18),
                                    *provider, 19);
  // Systems occasionally emit identical text; such clips lack 2 distinct captions.
  for (const auto& [id, reason] : result.skipped) {
    EXPECT_EQ(reason, "fewer than 2 distinct machine captions") << id;
  }
  const std::size_t used = 250 - result.skipped.size();
  EXPECT_GE(used, 240u);
  EXPECT_GE(result.pairs.size(), used * 4);
  EXPECT_LE(result.pairs.size(), used * 7);
}

TEST(GeneratePairsEdgeTest, AllSimilarMachineCaptionsFallBackToOnePair) {
  const std::vector<AudioEntry> dataset = {
      {"x", {"a man speaks", "wind blows hard"}, std::nullopt},
      {"y", {"a cat meows", "rain falls"}, std::nullopt}};
  std::map<std::string, std::vector<Caption>> machine;
  machine["x"] = {Machine("a dog barks", "s1"), Machine("a dog barking", "s2"),
                  Machine("a dog barked", "s3")};
  machine["y"] = {Machine("a car passes", "s1"), Machine("birds chirp", "s2")};
  const auto provider = MakeTestEmbedder(kTestEmbedderDefaultDim, 1);
  const auto result = GeneratePairs(dataset, machine, *provider, 1);
  int mm = 0;
  for (const auto& p : result.pairs) {
    if (p.audio_id != "x" || p.category != PairCategory::kMM) continue;
    ++mm;
    EXPECT_TRUE(p.similarity_fallback);
  }
  EXPECT_EQ(mm, 1);
}

TEST(GeneratePairsEdgeTest, SkipsEntriesThatCannotYieldPairs) {
  const std::vector<AudioEntry> dataset = {
      {"one_ref", {"a man speaks"}, std::nullopt},
      {"no_machine", {"a cat meows", "rain falls"}, std::nullopt},
      {"ok", {"a dog barks", "birds chirp"}, std::nullopt}};
  std::map<std::string, std::vector<Caption>> machine;
  machine["one_ref"] = {Machine("a b", "s1"), Machine("c d", "s2")};
  machine["no_machine"] = {Machine("a car passes", "s1"), Machine("a car passes", "s2")};
  machine["ok"] = {Machine("water flows", "s1"), Machine("a bell rings", "s2")};
  const auto provider = MakeTestEmbedder(kTestEmbedderDefaultDim, 1);
  const auto result = GeneratePairs(dataset, machine, *provider, 1);
  EXPECT_EQ(result.skipped.size(), 2u);
  EXPECT_TRUE(result.skipped.contains("one_ref"));
  EXPECT_TRUE(result.skipped.contains("no_machine"));
  for (const auto& p : result.pairs) EXPECT_EQ(p.audio_id, "ok");

  const auto alone = GeneratePairs({dataset[2]}, machine, *provider, 1);
  EXPECT_TRUE(alone.pairs.empty());
  EXPECT_TRUE(alone.skipped.contains("ok"));
}

// ---------------------------------------------------------------- protocol

TEST(EvalReferencesTest, MachinePairsUseAllLeaveOneOutSubsets) {
  const auto pair = Pair("p", "clip", PairCategory::kMM, Machine("x", "s1"), Machine("y", "s2"));
  const auto sets = EvalReferencesFor(pair, kFiveRefs);
  ASSERT_EQ(sets.side_a.size(), 5u);
  std::set<std::vector<std::string>> distinct;
  for (std::size_t i = 0; i < 5; ++i) {
    ASSERT_EQ(sets.side_a[i].size(), 4u);
    EXPECT_EQ(std::count(sets.side_a[i].begin(), sets.side_a[i].end(), kFiveRefs.references[i]), 0);
    distinct.insert(sets.side_a[i]);
  }
  EXPECT_EQ(distinct.size(), 5u);
  EXPECT_EQ(sets.side_a, sets.side_b);
}

TEST(EvalReferencesTest, HumanCorrectPairExcludesOwnCaption) {
  const auto& refs = kFiveRefs.references;
  const auto hc = Pair("p", "clip", PairCategory::kHC, Human(refs[1]), Human(refs[3]));
  const auto sets = EvalReferencesFor(hc, kFiveRefs);
  ASSERT_EQ(sets.side_a.size(), 1u);
  EXPECT_EQ(sets.side_a[0], (std::vector<std::string>{refs[0], refs[2], refs[3], refs[4]}));
  EXPECT_EQ(sets.side_b[0], (std::vector<std::string>{refs[0], refs[1], refs[2], refs[4]}));
}

TEST(EvalReferencesTest, HumanMachineAndIncorrectPairsDropTheCorrectCaption) {
  const auto& refs = kFiveRefs.references;
  const std::vector<std::string> rest = {refs[1], refs[2], refs[3], refs[4]};
  const auto hm = Pair("p", "clip", PairCategory::kHM, Machine("m", "s1"), Human(refs[0]));
  auto sets = EvalReferencesFor(hm, kFiveRefs);
  EXPECT_EQ(sets.side_a, std::vector<std::vector<std::string>>{rest});
  EXPECT_EQ(sets.side_b, sets.side_a);

  const auto hi = Pair("q", "clip", PairCategory::kHI, Human(refs[0], "clip"),
                       Human("a car passes", "elsewhere"));
  sets = EvalReferencesFor(hi, kFiveRefs);
  EXPECT_EQ(sets.side_a, std::vector<std::vector<std::string>>{rest});
}

TEST(EvalReferencesTest, ProtocolViolationsThrow) {
  const auto stray = Pair("p", "clip", PairCategory::kHC, Human("not a reference"),
                          Human(kFiveRefs.references[0]));
  EXPECT_THROW(EvalReferencesFor(stray, kFiveRefs), ProtocolError);
  auto wrong_audio = stray;
  wrong_audio.audio_id = "other";
  EXPECT_THROW(EvalReferencesFor(wrong_audio, kFiveRefs), ProtocolError);
  const auto no_human = Pair("p", "clip", PairCategory::kHM, Machine("a", "s"), Machine("b", "t"));
  EXPECT_THROW(EvalReferencesFor(no_human, kFiveRefs), ProtocolError);
  const AudioEntry single = {"clip", {"only"}, std::nullopt};
  const auto mm = Pair("p", "clip", PairCategory::kMM, Machine("a", "s"), Machine("b", "t"));
  EXPECT_THROW(EvalReferencesFor(mm, single), ProtocolError);
}

// Score depends on which reference the subset leaves out.
double ScriptedSubsetScore(const std::string& candidate, const std::vector<std::string>& refs) {
  static const std::map<std::string, std::vector<double>> kTable = {
      {"x", {1.0, 0.5, 0.5, 0.5, 0.5}},
      {"y", {0.55, 0.55, 0.55, 0.55, 0.55}},
  };
  for (std::size_t i = 0; i < kFiveRefs.references.size(); ++i) {
    if (std::find(refs.begin(), refs.end(), kFiveRefs.references[i]) == refs.end()) {
      return kTable.at(candidate)[i];
    }
  }
  ADD_FAILURE() << "subset does not leave a reference out";
  return 0.0;
}

TEST(MetricPairDecisionTest, MachinePairDecidedByMeanOverSubsets) {
  // x averages 0.60 and y 0.55 although y wins four of the five subsets.
  const auto pair = Pair("p", "clip", PairCategory::kMM, Machine("x", "s1"), Machine("y", "s2"));
  EXPECT_EQ(MetricPairDecision(ScriptedSubsetScore, pair, kFiveRefs), Decision::kA);
  const auto flipped = Pair("p", "clip", PairCategory::kMM, Machine("y", "s2"), Machine("x", "s1"));
  EXPECT_EQ(MetricPairDecision(ScriptedSubsetScore, flipped, kFiveRefs), Decision::kB);
}

TEST(MetricPairDecisionTest, TieIsUndecided) {
  const auto pair = Pair("p", "clip", PairCategory::kMM, Machine("x", "s1"), Machine("y", "s2"));
  const SentenceMetric constant = [](const std::string&, const std::vector<std::string>&) {
    return 0.3;
  };
  EXPECT_EQ(MetricPairDecision(constant, pair, kFiveRefs), Decision::kUndecided);
}

TEST(GoldTest, MajorityRules) {
  using C = Choice;
  const auto gold = [](std::vector<Choice> c) { return GoldFromJudgments(std::span<const Choice>(c)); };
  EXPECT_EQ(gold({C::kA, C::kB, C::kNotSure, C::kNotSure}), Gold::kExcluded);
  EXPECT_EQ(gold({C::kA, C::kA, C::kB, C::kNotSure}), Gold::kA);
  EXPECT_EQ(gold({C::kB, C::kNotSure, C::kNotSure, C::kNotSure}), Gold::kB);
  EXPECT_EQ(gold({C::kNotSure, C::kNotSure, C::kNotSure, C::kNotSure}), Gold::kExcluded);
  EXPECT_EQ(gold({C::kA, C::kA, C::kB, C::kB}), Gold::kExcluded);
  EXPECT_EQ(gold({}), Gold::kExcluded);

  const std::vector<Judgment> judgments = {{"p", "r1", C::kB, 0}, {"p", "r2", C::kB, 1},
                                           {"p", "r3", C::kA, 2}};
  EXPECT_EQ(GoldFromJudgments(std::span<const Judgment>(judgments)), Gold::kB);
}

TEST(GoldTest, PropertyOrderInvariantAndSwapSymmetric) {
  Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Choice> votes(1 + rng.Uniform(6));
    for (auto& v : votes) v = static_cast<Choice>(rng.Uniform(3));
    const Gold g = GoldFromJudgments(std::span<const Choice>(votes));
    auto shuffled = votes;
    rng.Shuffle(std::span<Choice>(shuffled));
    EXPECT_EQ(GoldFromJudgments(std::span<const Choice>(shuffled)), g);
    for (auto& v : shuffled) {
      if (v != Choice::kNotSure) v = v == Choice::kA ? Choice::kB : Choice::kA;
    }
    const Gold swapped = GoldFromJudgments(std::span<const Choice>(shuffled));
    const Gold expected = g == Gold::kA ? Gold::kB : g == Gold::kB ? Gold::kA : Gold::kExcluded;
    EXPECT_EQ(swapped, expected);
  }
}

// ---------------------------------------------------------------- report

SentenceMetric TokenCount() {
  return [](const std::string& candidate, const std::vector<std::string>&) {
    return static_cast<double>(std::count(candidate.begin(), candidate.end(), ' ') + 1);
  };
}

class ReportTest : public ::testing::Test {
 protected:
  ReportTest() {
    const auto& r = kFiveRefs.references;  // 4, 3, 2, 3 and 2 tokens
    pairs_ = {
        Pair("hc1", "clip", PairCategory::kHC, Human(r[1]), Human(r[0])),
        Pair("hc2", "clip", PairCategory::kHC, Human(r[0]), Human(r[2])),
        Pair("hm1", "clip", PairCategory::kHM, Human(r[0]), Machine("short one", "s1")),
        Pair("hm2", "clip", PairCategory::kHM, Machine("a very long machine caption", "s1"),
             Human(r[0])),
        Pair("mm_tie", "clip", PairCategory::kMM, Machine("aa bb", "s1"), Machine("cc dd", "s2")),
        Pair("mm_excluded", "clip", PairCategory::kMM, Machine("aa", "s1"), Machine("bb cc", "s2")),
        Pair("mm_unjudged", "clip", PairCategory::kMM, Machine("aa", "s1"), Machine("bb", "s2")),
    };
    gold_ = {{"hc1", Gold::kB}, {"hc2", Gold::kB},   {"hm1", Gold::kA},
             {"hm2", Gold::kB}, {"mm_tie", Gold::kA}, {"mm_excluded", Gold::kExcluded}};
  }

  std::vector<CaptionPair> pairs_;
  std::map<std::string, Gold> gold_;
};

TEST_F(ReportTest, MicroAveragedAccuracy) {
  const auto report = BenchmarkAgainstGold({"len", TokenCount()}, pairs_, gold_, {kFiveRefs});
  EXPECT_EQ(report.metric, "len");
  const auto& hc = report.categories.at(PairCategory::kHC);
  const auto& hm = report.categories.at(PairCategory::kHM);
  const auto& mm = report.categories.at(PairCategory::kMM);
  EXPECT_EQ(hc.correct, 1);
  EXPECT_EQ(hc.included, 2);
  EXPECT_DOUBLE_EQ(*hc.accuracy(), 50.0);
  EXPECT_EQ(hm.correct, 1);
  EXPECT_EQ(hm.included, 2);
  EXPECT_EQ(mm.included, 1);
  EXPECT_EQ(mm.correct, 0);
  EXPECT_FALSE(report.categories.at(PairCategory::kHI).accuracy().has_value());
  EXPECT_EQ(report.total.included, 5);
  EXPECT_EQ(report.total.correct, 2);
  EXPECT_DOUBLE_EQ(*report.total.accuracy(), 40.0);
  EXPECT_EQ(report.excluded, 1);
  EXPECT_EQ(report.unjudged, 1);
  EXPECT_EQ(report.undecided, 1);
  ASSERT_EQ(report.records.size(), pairs_.size());
  EXPECT_TRUE(std::is_sorted(report.records.begin(), report.records.end(),
                             [](const PairRecord& a, const PairRecord& b) {
                               return a.pair_id < b.pair_id;
                             }));
}

TEST_F(ReportTest, TotalIsMicroAverageOfCategories) {
  // HC 1/2 and HM 2/2 give 50, 100 and a 75 total.
  gold_["hm2"] = Gold::kA;
  gold_.erase("mm_tie");
  const auto report = BenchmarkAgainstGold({"len", TokenCount()}, pairs_, gold_, {kFiveRefs});
  EXPECT_DOUBLE_EQ(*report.categories.at(PairCategory::kHC).accuracy(), 50.0);
  EXPECT_DOUBLE_EQ(*report.categories.at(PairCategory::kHM).accuracy(), 100.0);
  EXPECT_DOUBLE_EQ(*report.total.accuracy(), 75.0);
}

TEST_F(ReportTest, ConstantMetricScoresZero) {
  const SentenceMetric constant = [](const std::string&, const std::vector<std::string>&) {
    return 1.0;
  };
  const auto report = BenchmarkAgainstGold({"const", constant}, pairs_, gold_, {kFiveRefs});
  EXPECT_EQ(report.total.correct, 0);
  EXPECT_EQ(report.undecided, report.total.included);
}

TEST_F(ReportTest, JudgmentsPathMatchesGoldPath) {
  std::vector<Judgment> judgments;
  std::int64_t t = 0;
  for (const auto& [id, g] : gold_) {
    const Choice winner = g == Gold::kA ? Choice::kA : Choice::kB;
    const Choice loser = g == Gold::kA ? Choice::kB : Choice::kA;
    if (g == Gold::kExcluded) {
      judgments.push_back({id, "r1", Choice::kA, t++});
      judgments.push_back({id, "r2", Choice::kB, t++});
    } else {
      judgments.push_back({id, "r1", winner, t++});
      judgments.push_back({id, "r2", winner, t++});
      judgments.push_back({id, "r3", loser, t++});
    }
  }
  const NamedMetric metric{"len", TokenCount()};
  const auto via_votes = BenchmarkMetric(metric, pairs_, judgments, {kFiveRefs});
  const auto via_gold = BenchmarkAgainstGold(metric, pairs_, gold_, {kFiveRefs});
  EXPECT_EQ(via_votes.total.correct, via_gold.total.correct);
  EXPECT_EQ(via_votes.total.included, via_gold.total.included);
  EXPECT_EQ(via_votes.excluded, via_gold.excluded);
  EXPECT_EQ(via_votes.unjudged, via_gold.unjudged);
}

TEST_F(ReportTest, DanglingIdsAreRejected) {
  EXPECT_THROW(ValidateBenchmarkInputs(pairs_, {{"ghost", "r1", Choice::kA, 0}}, {kFiveRefs}),
               std::invalid_argument);
  auto orphan = pairs_;
  orphan[0].audio_id = "missing";
  EXPECT_THROW(ValidateBenchmarkInputs(orphan, {}, {kFiveRefs}), std::invalid_argument);
  auto duplicate = pairs_;
  duplicate.push_back(pairs_[0]);
  EXPECT_THROW(ValidateBenchmarkInputs(duplicate, {}, {kFiveRefs}), std::invalid_argument);
  EXPECT_NO_THROW(ValidateBenchmarkInputs(pairs_, {{"hc1", "r1", Choice::kA, 0}}, {kFiveRefs}));
}

// ---------------------------------------------------------------- kappa

TEST(FleissKappaTest, HandComputedCase) {
  // Items: (3 A), (2 A, 1 B).
  const auto r = FleissKappa({{3, 0}, {2, 1}});
  EXPECT_NEAR(r.kappa, -0.2, 1e-15);
  EXPECT_FALSE(r.degenerate);
}

TEST(FleissKappaTest, UnanimousIsOne) {
  EXPECT_DOUBLE_EQ(FleissKappa({{4, 0, 0}, {0, 4, 0}, {0, 0, 4}}).kappa, 1.0);
  const auto degenerate = FleissKappa({{3, 0}, {3, 0}});
  EXPECT_EQ(degenerate.kappa, 1.0);
  EXPECT_TRUE(degenerate.degenerate);
}

TEST(FleissKappaTest, RandomJudgmentsAreNearZero) {
  Rng rng(2024);
  std::vector<std::vector<int>> counts(10000, std::vector<int>(3, 0));
  for (auto& row : counts) {
    for (int rater = 0; rater < 4; ++rater) ++row[rng.Uniform(3)];
  }
  EXPECT_LE(std::abs(FleissKappa(counts).kappa), 0.05);
}

TEST(FleissKappaTest, PropertyInvariantUnderItemAndCategoryPermutation) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t items = 2 + rng.Uniform(20);
    const std::size_t categories = 2 + rng.Uniform(3);
    const int raters = 2 + static_cast<int>(rng.Uniform(5));
    std::vector<std::vector<int>> counts(items, std::vector<int>(categories, 0));
    for (auto& row : counts) {
      for (int k = 0; k < raters; ++k) ++row[rng.Uniform(categories)];
    }
    const auto base = FleissKappa(counts);
    EXPECT_LE(base.kappa, 1.0 + 1e-12);

    auto items_shuffled = counts;
    rng.Shuffle(std::span<std::vector<int>>(items_shuffled));
    EXPECT_NEAR(FleissKappa(items_shuffled).kappa, base.kappa, 1e-12);

    std::vector<std::size_t> perm(categories);
    for (std::size_t i = 0; i < categories; ++i) perm[i] = i;
    rng.Shuffle(std::span<std::size_t>(perm));
    auto relabeled = counts;
    for (std::size_t i = 0; i < items; ++i) {
      for (std::size_t c = 0; c < categories; ++c) relabeled[i][perm[c]] = counts[i][c];
    }
    EXPECT_NEAR(FleissKappa(relabeled).kappa, base.kappa, 1e-12);
  }
}

TEST(FleissKappaTest, InvalidInputsThrow) {
  EXPECT_THROW(FleissKappa({}), std::invalid_argument);
  EXPECT_THROW(FleissKappa({{2, 1}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(FleissKappa({{3, -1}, {2, 0}}), std::invalid_argument);
  EXPECT_THROW(FleissKappa({{3}, {3}}), std::invalid_argument);
  EXPECT_THROW(FleissKappa({{1, 0}, {0, 1}}), std::invalid_argument);
}

// ---------------------------------------------------------------- wins

TEST(WinFractionsTest, CountsDecidedMachineComparisons) {
  const std::vector<CaptionPair> pairs = {
      Pair("1", "c", PairCategory::kMM, Machine("a", "alpha"), Machine("b", "beta")),
      Pair("2", "c", PairCategory::kMM, Machine("c", "beta"), Machine("d", "alpha")),
      Pair("3", "c", PairCategory::kMM, Machine("e", "alpha"), Machine("f", "gamma")),
      Pair("4", "c", PairCategory::kMM, Machine("g", "alpha"), Machine("h", "alpha")),
      Pair("5", "c", PairCategory::kMM, Machine("i", "delta"), Machine("j", "beta")),
      Pair("6", "c", PairCategory::kHM, Human("k"), Machine("l", "alpha")),
  };
  const std::map<std::string, Decision> decisions = {
      {"1", Decision::kA}, {"2", Decision::kA}, {"3", Decision::kB},
      {"4", Decision::kA}, {"5", Decision::kUndecided}, {"6", Decision::kB}};
  const auto report = WinFractions(pairs, decisions);
  EXPECT_EQ(report.same_system_pairs, 1);
  EXPECT_EQ(report.systems.at("alpha").wins, 1);
  EXPECT_EQ(report.systems.at("alpha").decided, 3);
  EXPECT_EQ(report.systems.at("beta").wins, 1);
  EXPECT_EQ(report.systems.at("beta").decided, 2);
  EXPECT_DOUBLE_EQ(report.systems.at("gamma").fraction(), 1.0);
  EXPECT_EQ(report.omitted, std::vector<std::string>{"delta"});
  EXPECT_FALSE(report.systems.contains("delta"));
}

TEST(WinFractionsTest, PropertyWinsSumToDecidedPairs) {
  Rng rng(5);
  const std::vector<std::string> systems = {"s1", "s2", "s3", "s4"};
  std::vector<CaptionPair> pairs;
  std::map<std::string, Decision> decisions;
  int decided_pairs = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t x = rng.Uniform(4);
    const std::size_t y = (x + 1 + rng.Uniform(3)) % 4;
    const std::string id = "p" + std::to_string(i);
    pairs.push_back(Pair(id, "c", PairCategory::kMM, Machine("a", systems[x]),
                         Machine("b", systems[y])));
    const auto d = static_cast<Decision>(rng.Uniform(3));
    decisions[id] = d;
    if (d != Decision::kUndecided) ++decided_pairs;
  }
  const auto report = WinFractions(pairs, decisions);
  int wins = 0;
  int decided = 0;
  for (const auto& [name, w] : report.systems) {
    wins += w.wins;
    decided += w.decided;
    EXPECT_GE(w.fraction(), 0.0);
    EXPECT_LE(w.fraction(), 1.0);
  }
  EXPECT_EQ(wins, decided_pairs);
  EXPECT_EQ(decided, 2 * decided_pairs);
}

TEST(DecisionFromGoldTest, Mapping) {
  EXPECT_EQ(DecisionFromGold(Gold::kA), Decision::kA);
  EXPECT_EQ(DecisionFromGold(Gold::kB), Decision::kB);
  EXPECT_EQ(DecisionFromGold(Gold::kExcluded), Decision::kUndecided);
}

}  // namespace
}  // namespace fense
