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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "cider_oracle.h"
#include "fense/random.h"

namespace fense {
namespace {

constexpr double kTol = 1e-6;

TokenSeq T(const char* text) { return Tokenize(text); }

TEST(BleuTest, BrevityPenaltyExample) {
  EXPECT_NEAR(Bleu(T("a dog barks"), {T("a dog barks loudly")}, 1), 0.716531, kTol);
  EXPECT_NEAR(Bleu(T("a dog barks"), {T("a dog barks loudly")}, 1), std::exp(1.0 - 4.0 / 3.0),
              1e-12);
}

TEST(BleuTest, IdentityIsOne) {
  for (const char* s : {"dog", "a dog", "a dog barks", "a dog barks loudly in the yard"}) {
    EXPECT_DOUBLE_EQ(Bleu(T(s), {T(s)}, 1), 1.0) << s;
    EXPECT_DOUBLE_EQ(Bleu(T(s), {T(s)}, 4), 1.0) << s;
  }
}

TEST(BleuTest, ClipsCountsByReferenceMaximum) {
  EXPECT_NEAR(Bleu(T("the the the"), {T("the cat"), T("the the dog")}, 1), 2.0 / 3.0, 1e-12);
}

TEST(BleuTest, ClosestReferenceLengthTiesToShorter) {
  // Lengths 2 and 4 are equally close to 3; the shorter one gives BP = 1.
  EXPECT_DOUBLE_EQ(Bleu(T("a b c"), {T("a b"), T("a b c d")}, 1), 1.0);
}

TEST(BleuTest, FourGramHandComputed) {
  // p1 = 3/4, p2 = 2/3, p3 = 1/2, p4 = 0 -> floor.
  const double expected = std::exp((std::log(0.75) + std::log(2.0 / 3.0) + std::log(0.5) +
                                    std::log(1e-9)) / 4.0);
  EXPECT_NEAR(Bleu(T("a dog barks loudly"), {T("a dog barks softly")}, 4), expected, 1e-15);
}

TEST(BleuTest, ZeroOverlapIsFloor) {
  EXPECT_NEAR(Bleu(T("cat meows"), {T("a dog barks")}, 1), 0.0, 1e-8);
  EXPECT_GT(Bleu(T("cat meows"), {T("a dog barks")}, 1), 0.0);
}

TEST(BleuTest, Errors) {
  EXPECT_EQ(Bleu({}, {T("a dog")}, 4), 0.0);
  EXPECT_THROW(Bleu(T("a dog"), {}, 1), std::invalid_argument);
  EXPECT_THROW(Bleu(T("a dog"), {T("a dog")}, 2), std::invalid_argument);
}

TEST(RougeLTest, Example) {
  // P = 1, R = 3/4, beta = 1.2.
  EXPECT_NEAR(RougeL(T("a dog barks"), {T("a dog barks loudly")}), 0.835616, kTol);
  const double b2 = 1.44, p = 1.0, r = 0.75;
  EXPECT_NEAR(RougeL(T("a dog barks"), {T("a dog barks loudly")}),
              (1 + b2) * p * r / (r + b2 * p), 1e-12);
}

TEST(RougeLTest, IdentityAndDisjoint) {
  EXPECT_DOUBLE_EQ(RougeL(T("a dog barks"), {T("a dog barks")}), 1.0);
  EXPECT_EQ(RougeL(T("a dog barks"), {T("rain falls")}), 0.0);
  EXPECT_EQ(RougeL({}, {T("rain falls")}), 0.0);
  EXPECT_THROW(RougeL(T("a"), {}), std::invalid_argument);
}

TEST(RougeLTest, TakesBestReference) {
  EXPECT_DOUBLE_EQ(RougeL(T("a dog barks"), {T("rain falls"), T("a dog barks")}), 1.0);
}

TEST(MeteorTest, IdenticalFourTokenSentence) {
  // One chunk over four matches: 1 - 0.5 * (1/4)^3.
  EXPECT_NEAR(Meteor(T("a dog barks loudly"), {T("a dog barks loudly")}), 0.9921875, kTol);
}

TEST(MeteorTest, StemTierMatches) {
  // "barking" aligns with "barks" through the stem tier.
  EXPECT_NEAR(Meteor(T("a dog barking"), {T("a dog barks")}), 1.0 - 0.5 / 27.0, 1e-12);
}

TEST(MeteorTest, HandComputedPartialMatch) {
  // m = 2, P = 2/3, R = 2/5, one chunk.
  const double p = 2.0 / 3.0, r = 0.4;
  const double fmean = p * r / (0.9 * p + 0.1 * r);
  EXPECT_NEAR(Meteor(T("the cat sat"), {T("a cat sat on mat")}),
              fmean * (1.0 - 0.5 * std::pow(0.5, 3.0)), 1e-12);
}

TEST(MeteorTest, ChunksCountDiscontiguousMatches) {
  // Matches "dog" and "barks" are not adjacent in the reference: 2 chunks.
  const double p = 2.0 / 3.0, r = 2.0 / 4.0;
  const double fmean = p * r / (0.9 * p + 0.1 * r);
  EXPECT_NEAR(Meteor(T("barks the dog"), {T("a dog loudly barks")}),
              fmean * (1.0 - 0.5 * std::pow(2.0 / 2.0, 3.0)), 1e-12);
}

TEST(MeteorTest, NoMatch) {
  EXPECT_EQ(Meteor(T("cat meows"), {T("a dog barks")}), 0.0);
  EXPECT_THROW(Meteor(T("a"), {}), std::invalid_argument);
}

TEST(CiderDTest, IdenticalCandidateTwoItemCorpus) {
  const std::vector<CiderItem> items = {
      {T("a dog barks loudly"), {T("a dog barks loudly")}},
      {T("rain falls on roof"), {T("rain falls on roof")}}};
  const auto scores = CiderD(items);
  EXPECT_NEAR(scores[0], 10.0, kTol);
  EXPECT_NEAR(scores[1], 10.0, kTol);
}

TEST(CiderDTest, RequiresTwoItems) {
  EXPECT_THROW(CiderD(std::vector<CiderItem>{{T("a"), {T("a")}}}), std::invalid_argument);
  EXPECT_THROW(CiderCorpusStats::FromReferenceSets({{T("a")}}), std::invalid_argument);
}

TEST(CiderDTest, DocumentFrequencyCountsItemsNotOccurrences) {
  const auto stats = CiderCorpusStats::FromReferenceSets(
      {{T("a dog a dog"), T("a dog")}, {T("a cat")}, {T("rain")}});
  EXPECT_EQ(stats.num_items(), 3);
  EXPECT_EQ(stats.DocFreq({"a"}), 2);
  EXPECT_EQ(stats.DocFreq({"a", "dog"}), 1);
  EXPECT_EQ(stats.DocFreq({"zebra"}), 0);
}

TEST(CiderDTest, CandidateWithOnlyCommonGramsScoresZero) {
  // Every candidate n-gram occurs in every item, so all idf weights are zero.
  const std::vector<CiderItem> items = {{T("a"), {T("a dog")}}, {T("a"), {T("a cat")}}};
  EXPECT_EQ(CiderD(items)[0], 0.0);
}

std::vector<testsupport::OracleItem> RandomCorpus(Rng& rng) {
  static const std::vector<std::string> vocab = {"a", "dog", "barks", "the", "cat", "rain"};
  const auto sentence = [&] {
    std::vector<std::string> s;
    const std::size_t len = 1 + rng.Uniform(8);
    for (std::size_t i = 0; i < len; ++i) s.push_back(vocab[rng.Uniform(vocab.size())]);
    return s;
  };
  std::vector<testsupport::OracleItem> corpus(2 + rng.Uniform(5));
  for (auto& item : corpus) {
    item.candidate = sentence();
    const std::size_t refs = 1 + rng.Uniform(3);
    for (std::size_t r = 0; r < refs; ++r) item.references.push_back(sentence());
  }
  return corpus;
}

TEST(CiderDTest, MatchesBruteForceOracle) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto corpus = RandomCorpus(rng);
    std::vector<CiderItem> items;
    for (const auto& item : corpus) items.push_back({item.candidate, item.references});
    const auto expected = testsupport::OracleCiderD(corpus);
    const auto actual = CiderD(items);
    ASSERT_EQ(actual.size(), expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      EXPECT_NEAR(actual[i], expected[i], 1e-9) << "trial " << trial << " item " << i;
    }
  }
}

TEST(MetricRangeProperty, ScoresStayInRange) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto corpus = RandomCorpus(rng);
    std::vector<CiderItem> items;
    for (const auto& item : corpus) items.push_back({item.candidate, item.references});
    for (double c : CiderD(items)) {
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 10.0 + 1e-9);
    }
    for (const auto& item : corpus) {
      for (double s : {Bleu(item.candidate, item.references, 1),
                       Bleu(item.candidate, item.references, 4),
                       RougeL(item.candidate, item.references),
                       Meteor(item.candidate, item.references)}) {
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0 + 1e-12);
      }
    }
  }
}

TEST(MetricAdapterTest, TokenizesRawText) {
  EXPECT_NEAR(MakeBleuMetric(1)("A dog barks!", {"a dog barks loudly."}), 0.716531, kTol);
  EXPECT_NEAR(MakeRougeLMetric()("A dog barks!", {"a dog barks loudly."}), 0.835616, kTol);
  EXPECT_NEAR(MakeMeteorMetric()("A dog barks loudly", {"a dog barks loudly"}), 0.9921875,
              kTol);
  const auto stats = CiderCorpusStats::FromReferenceSets(
      {{T("a dog barks loudly")}, {T("rain falls on roof")}});
  EXPECT_NEAR(MakeCiderDMetric(stats)("a dog barks loudly", {"a dog barks loudly"}), 10.0, kTol);
}

}  // namespace
}  // namespace fense
