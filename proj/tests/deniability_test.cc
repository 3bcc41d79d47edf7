//
// Copyright 2026 The Diffractor Authors
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

#include "diffractor/deniability.h"

#include <cmath>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "diffractor/csv.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace diffractor {
namespace {

using ::diffractor::testing::RandomModel;

std::shared_ptr<const ListBank> SyntheticBank(std::size_t vocab,
                                              std::size_t models) {
  std::vector<WordList> lists;
  for (std::size_t m = 0; m < models; ++m) {
    auto model = RandomModel(vocab, 16, 500 + m);
    EXPECT_TRUE(model.ok());
    auto list = BuildWordList(*model, m);
    EXPECT_TRUE(list.ok());
    lists.push_back(*std::move(list));
  }
  return std::make_shared<const ListBank>(*ListBank::Create(std::move(lists)));
}

DiffractorConfig Config(std::shared_ptr<const ListBank> bank, double eps) {
  DiffractorConfig cfg;
  cfg.bank = std::move(bank);
  cfg.mechanism.epsilon = eps;
  return cfg;
}

TEST(EstimateDeniabilityTest, LargeEpsilonLeavesWordsUnchanged) {
  auto cfg = Config(SyntheticBank(300, 2), 50.0);
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(report, EstimateDeniability(cfg, 100, 100, 1));
  EXPECT_GE(report.mean_n_w, 0.95);
  EXPECT_EQ(report.words.size(), 100u);
}

TEST(EstimateDeniabilityTest, SingleTrialGivesUnitSupport) {
  auto cfg = Config(SyntheticBank(300, 2), 0.5);
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(report, EstimateDeniability(cfg, 50, 1, 2));
  for (const DeniabilityStats& s : report.words) EXPECT_EQ(s.s_w, 1u);
  EXPECT_DOUBLE_EQ(report.mean_s_w, 1.0);
}

TEST(EstimateDeniabilityTest, SingleWordListIsDegenerate) {
  std::vector<WordList> lists;
  lists.push_back(*WordList::FromWords({"solo"}));
  auto bank = std::make_shared<const ListBank>(*ListBank::Create(std::move(lists)));
  for (double eps : {0.01, 1.0, 10.0}) {
    DIFFRACTOR_ASSERT_OK_AND_ASSIGN(
        report, EstimateDeniability(Config(bank, eps), 100, 100, 3));
    ASSERT_EQ(report.words.size(), 1u);
    EXPECT_EQ(report.words[0].n_w, 1.0);
    EXPECT_EQ(report.words[0].s_w, 1u);
  }
}

TEST(EstimateDeniabilityTest, StatsRespectInvariants) {
  auto cfg = Config(SyntheticBank(200, 3), 1.0);
  constexpr std::size_t kTrials = 37;
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(report, EstimateDeniability(cfg, 60, kTrials, 4));
  std::set<std::string> distinct;
  double mean_n = 0;
  for (const DeniabilityStats& s : report.words) {
    distinct.insert(s.word);
    EXPECT_GE(s.s_w, 1u);
    EXPECT_LE(s.s_w, kTrials);
    EXPECT_EQ(s.trials, kTrials);
    const double count = s.n_w * kTrials;
    EXPECT_NEAR(count, std::round(count), 1e-9);
    EXPECT_EQ(s.unchanged, static_cast<std::size_t>(std::round(count)));
    mean_n += s.n_w;
  }
  EXPECT_EQ(distinct.size(), 60u);
  EXPECT_NEAR(report.mean_n_w, mean_n / 60, 1e-12);
}

TEST(EstimateDeniabilityTest, SampleCappedByVocabulary) {
  auto cfg = Config(SyntheticBank(40, 1), 1.0);
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(report, EstimateDeniability(cfg, 100, 10, 5));
  EXPECT_EQ(report.words.size(), 40u);
}

TEST(EstimateDeniabilityTest, DeterministicForSeed) {
  auto cfg = Config(SyntheticBank(200, 2), 0.7);
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(a, EstimateDeniability(cfg, 30, 50, 9));
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(b, EstimateDeniability(cfg, 30, 50, 9));
  ASSERT_EQ(a.words.size(), b.words.size());
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    EXPECT_EQ(a.words[i].word, b.words[i].word);
    EXPECT_EQ(a.words[i].n_w, b.words[i].n_w);
    EXPECT_EQ(a.words[i].s_w, b.words[i].s_w);
  }
}

TEST(EstimateDeniabilityTest, RejectsZeroTrials) {
  auto cfg = Config(SyntheticBank(20, 1), 1.0);
  EXPECT_EQ(EstimateDeniability(cfg, 10, 0, 1).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(EstimateDeniabilityTest, MonotoneAcrossEpsilonGrid) {
  auto bank = SyntheticBank(1000, 3);
  const std::vector<double> grid = {0.1, 0.5, 1, 3, 5, 10};
  std::vector<double> n_w, s_w;
  for (double eps : grid) {
    DIFFRACTOR_ASSERT_OK_AND_ASSIGN(
        report, EstimateDeniability(Config(bank, eps), 100, 10000, 77));
    n_w.push_back(report.mean_n_w);
    s_w.push_back(report.mean_s_w);
  }
  int inversions = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (n_w[k] < n_w[k - 1]) ++inversions;
    if (s_w[k] > s_w[k - 1]) ++inversions;
  }
  EXPECT_LE(inversions, 1);
}

TEST(ExpectedNwTest, InteriorIndexMatchesMassAtZero) {
  std::vector<std::string> words;
  for (int i = 0; i < 101; ++i) words.push_back("w" + std::to_string(i));
  std::vector<WordList> lists;
  lists.push_back(*WordList::FromWords(words));
  auto cfg = Config(
      std::make_shared<const ListBank>(*ListBank::Create(std::move(lists))), 1.0);
  EXPECT_NEAR(*ExpectedNw("w50", cfg), 0.46211715726000974, 1e-12);
  // Index 0 also absorbs the clamped left tail: 1 / (1 + e^-1).
  EXPECT_NEAR(*ExpectedNw("w0", cfg), 0.7310585786300049, 1e-12);
}

TEST(ExpectedNwTest, OutOfVocabularyIsMembershipError) {
  auto cfg = Config(SyntheticBank(20, 1), 1.0);
  EXPECT_EQ(ExpectedNw("absent", cfg).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(ExpectedNwTest, MonteCarloAgreesWithinFourSe) {
  auto bank = SyntheticBank(200, 3);
  for (MechanismKind kind : {MechanismKind::kGeometric, MechanismKind::kTem1D}) {
    auto cfg = Config(bank, 0.8);
    cfg.mechanism.kind = kind;
    const std::vector<std::string> words = {bank->list(0).WordAt(0),
                                            bank->list(1).WordAt(100)};
    constexpr std::size_t kTrials = 100000;
    DIFFRACTOR_ASSERT_OK_AND_ASSIGN(report,
                                    EstimateDeniabilityFor(cfg, words, kTrials, 6));
    for (const DeniabilityStats& s : report.words) {
      const double p = *ExpectedNw(s.word, cfg);
      const double se = std::sqrt(p * (1 - p) / kTrials);
      EXPECT_LE(std::fabs(s.n_w - p), 4 * se) << s.word;
    }
  }
}

TEST(DeniabilityCsvTest, HeaderAndQuotedRows) {
  DeniabilityReport report;
  DeniabilityStats s;
  s.word = "a,b";
  s.epsilon = 0.5;
  s.trials = 10;
  s.n_w = 0.3;
  s.s_w = 4;
  report.words.push_back(s);
  std::ostringstream out;
  WriteDeniabilityCsvHeader(out);
  WriteDeniabilityCsvRows(out, report, "geometric", "L0");
  EXPECT_EQ(out.str(),
            "word,epsilon,mechanism,config,trials,n_w,s_w\n"
            "\"a,b\",0.5,geometric,L0,10,0.3,4\n");
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_THAT(ParseCsvLine(row),
              ::testing::ElementsAre("a,b", "0.5", "geometric", "L0", "10", "0.3",
                                     "4"));
}

}  // namespace
}  // namespace diffractor
