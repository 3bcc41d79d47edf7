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

#include "diffractor/diffractor.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "diffractor/tokenizer.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace diffractor {
namespace {

using ::diffractor::testing::ReferenceMaxDistance;
using ::diffractor::testing::ReferenceMixture;
using ::testing::ElementsAre;
using ::testing::IsEmpty;

// Larger than any epsilon at which a 53-bit uniform can produce nonzero
// geometric noise, so the mechanism is the identity.
constexpr double kNoiselessEpsilon = 50.0;

WordList MakeList(std::vector<std::string> words) {
  auto list = WordList::FromWords(std::move(words));
  EXPECT_TRUE(list.ok()) << list.status();
  return *std::move(list);
}

std::shared_ptr<const ListBank> MakeBank(
    std::vector<std::vector<std::string>> lists) {
  std::vector<WordList> built;
  for (auto& words : lists) built.push_back(MakeList(std::move(words)));
  auto bank = ListBank::Create(std::move(built));
  EXPECT_TRUE(bank.ok());
  return std::make_shared<const ListBank>(*std::move(bank));
}

DiffractorConfig Config(std::shared_ptr<const ListBank> bank, double eps,
                        MechanismKind kind = MechanismKind::kGeometric) {
  DiffractorConfig cfg;
  cfg.bank = std::move(bank);
  cfg.mechanism.kind = kind;
  cfg.mechanism.epsilon = eps;
  cfg.mechanism.beta = 0.01;
  return cfg;
}

std::vector<std::string> Texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.emplace_back(t.text);
  return out;
}

TEST(TokenizerTest, SplitsEdgePunctuation) {
  EXPECT_THAT(Texts(Tokenize("Hello, world!")),
              ElementsAre("Hello", ",", "world", "!"));
  EXPECT_THAT(Texts(Tokenize("  (quoted)\t\"text\"...  ")),
              ElementsAre("(", "quoted", ")", "\"", "text", "\"", ".", ".", "."));
}

TEST(TokenizerTest, KeepsInnerPunctuation) {
  EXPECT_THAT(Texts(Tokenize("don't e-mail")), ElementsAre("don't", "e-mail"));
}

TEST(TokenizerTest, ClassifiesWords) {
  const auto tokens = Tokenize("cat 42 3.14 , café x2");
  std::vector<bool> is_word;
  for (const Token& t : tokens) is_word.push_back(t.is_word);
  EXPECT_THAT(Texts(tokens), ElementsAre("cat", "42", "3.14", ",", "café", "x2"));
  EXPECT_THAT(is_word, ElementsAre(true, false, false, false, true, true));
}

TEST(TokenizerTest, EmptyAndBlankInput) {
  EXPECT_THAT(Tokenize(""), IsEmpty());
  EXPECT_THAT(Tokenize(" \t \n"), IsEmpty());
}

TEST(ListBankTest, RejectsEmptyBank) {
  EXPECT_EQ(ListBank::Create({}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ListBankTest, MembershipAndVocabulary) {
  auto bank = MakeBank({{"a", "b", "c"}, {"c", "d"}, {"e", "a"}});
  EXPECT_EQ(bank->Containing("a").size(), 2u);
  EXPECT_EQ(bank->Containing("a")[1], std::make_pair(std::size_t{2}, std::size_t{1}));
  EXPECT_TRUE(bank->ContainsAnywhere("d"));
  EXPECT_FALSE(bank->ContainsAnywhere("z"));
  EXPECT_THAT(bank->VocabularyUnion(), ElementsAre("a", "b", "c", "d", "e"));
}

TEST(BankTagTest, RoundTrips) {
  for (BankTag tag : {BankTag::kL0, BankTag::kL1, BankTag::kL2, BankTag::kCustom}) {
    EXPECT_EQ(ParseBankTag(BankTagName(tag)), tag);
  }
  EXPECT_FALSE(ParseBankTag("L9").has_value());
}

TEST(DiffractorConfigTest, RequiresBankAndValidMechanism) {
  DiffractorConfig cfg;
  EXPECT_EQ(cfg.Validate().code(), absl::StatusCode::kInvalidArgument);
  cfg = Config(MakeBank({{"a", "b"}}), -1);
  EXPECT_EQ(cfg.Validate().code(), absl::StatusCode::kInvalidArgument);
  cfg.mechanism.epsilon = 1;
  EXPECT_TRUE(cfg.Validate().ok());
}

TEST(PerturbWordTest, ZeroNoiseReturnsInput) {
  auto cfg = Config(MakeBank({{"a", "b", "c", "d", "e"}}), kNoiselessEpsilon);
  Rng rng = MakeStream(1, 0);
  for (const char* w : {"a", "c", "e"}) {
    const PerturbationRecord r = PerturbWord(w, cfg, rng);
    EXPECT_EQ(r.output, w);
    EXPECT_FALSE(r.was_oov);
    EXPECT_EQ(r.chosen_list, 0u);
  }
}

TEST(PerturbWordTest, OutOfVocabularyPassthrough) {
  auto cfg = Config(MakeBank({{"a", "b"}}), 1.0);
  Rng rng = MakeStream(1, 0);
  const PerturbationRecord r = PerturbWord("zebra", cfg, rng);
  EXPECT_EQ(r.output, "zebra");
  EXPECT_TRUE(r.was_oov);
  EXPECT_FALSE(r.chosen_list.has_value());
  EXPECT_EQ(r.lists_considered, 0u);
}

TEST(PerturbWordTest, OutOfVocabularyDrop) {
  auto cfg = Config(MakeBank({{"a", "b"}}), 1.0);
  cfg.oov_policy = OovPolicy::kDrop;
  Rng rng = MakeStream(1, 0);
  const PerturbationRecord r = PerturbWord("zebra", cfg, rng);
  EXPECT_EQ(r.output, "");
  EXPECT_TRUE(r.was_oov);
}

TEST(PerturbWordTest, CasePolicies) {
  auto cfg = Config(MakeBank({{"the", "cat"}, {"The", "dog"}}), kNoiselessEpsilon);
  Rng rng = MakeStream(1, 0);
  // Lowercase: "The" resolves to "the", which only the first list holds.
  PerturbationRecord r = PerturbWord("The", cfg, rng);
  EXPECT_EQ(r.output, "the");
  EXPECT_EQ(r.chosen_list, 0u);
  // Preserve: the exact form is found in the second list.
  cfg.case_policy = CasePolicy::kPreserveAttempt;
  r = PerturbWord("The", cfg, rng);
  EXPECT_EQ(r.output, "The");
  EXPECT_EQ(r.chosen_list, 1u);
  // Preserve falls back to the folded form.
  r = PerturbWord("CAT", cfg, rng);
  EXPECT_EQ(r.output, "cat");
}

TEST(PerturbWordTest, SubsetDiffractionUsesOnlyContainingLists) {
  auto cfg = Config(MakeBank({{"a", "b", "c"}, {"x", "y", "a"}, {"y", "x"}}), 1.0);
  Rng rng = MakeStream(2, 0);
  for (int n = 0; n < 200; ++n) {
    const PerturbationRecord r = PerturbWord("c", cfg, rng);
    EXPECT_EQ(r.chosen_list, 0u);
    EXPECT_EQ(r.lists_considered, 1u);
    const PerturbationRecord r2 = PerturbWord("a", cfg, rng);
    EXPECT_EQ(r2.lists_considered, 2u);
    EXPECT_NE(r2.chosen_list, 2u);
  }
}

TEST(PerturbWordTest, ReleasesExactlyOneCandidate) {
  auto cfg = Config(MakeBank({{"a", "b", "c"}, {"c", "a", "b"}, {"b", "c", "a"}}),
                    0.5);
  Rng rng = MakeStream(3, 0);
  const PerturbationRecord plain = PerturbWord("a", cfg, rng);
  EXPECT_THAT(plain.candidates, IsEmpty());
  cfg.debug_candidates = true;
  for (int n = 0; n < 100; ++n) {
    const PerturbationRecord r = PerturbWord("a", cfg, rng);
    ASSERT_EQ(r.candidates.size(), 3u);
    ASSERT_TRUE(r.chosen_list.has_value());
    int matches = 0;
    for (const Candidate& c : r.candidates) {
      if (c.list == *r.chosen_list) {
        EXPECT_EQ(c.word, r.output);
        ++matches;
      }
    }
    EXPECT_EQ(matches, 1);
  }
}

// Monte Carlo frequencies of PerturbWord against the mixture of per-list
// exact laws, bin by bin within 4 standard errors.
void ExpectMixtureLaw(const DiffractorConfig& cfg, const std::string& word,
                      int draws, uint64_t seed) {
  const auto law = ReferenceMixture(
      *cfg.bank, word, [&](std::size_t index, std::size_t v) {
        return ExactPmf(cfg.mechanism, index, v);
      });
  std::map<std::string, double> counts;
  Rng rng = MakeStream(seed, 0);
  for (int n = 0; n < draws; ++n) counts[PerturbWord(word, cfg, rng).output] += 1;
  for (const auto& [w, c] : counts) {
    ASSERT_TRUE(law.count(w)) << "impossible output " << w;
  }
  for (const auto& [w, p] : law) {
    const double p_hat = counts[w] / draws;
    const double se = std::sqrt(p * (1 - p) / draws);
    EXPECT_LE(std::fabs(p_hat - p), 4 * se + 1e-12)
        << word << " -> " << w << " expected " << p << " got " << p_hat;
  }
}

TEST(PerturbWordTest, TwoListMixtureMatchesExactLaw) {
  auto cfg = Config(MakeBank({{"a", "b", "c", "d", "e"}, {"c", "e", "a", "d", "b"}}),
                    1.0);
  ExpectMixtureLaw(cfg, "a", 100000, 10);
  ExpectMixtureLaw(cfg, "d", 100000, 11);
}

TEST(PerturbWordTest, ThreeListMixtureWithPartialOverlap) {
  std::vector<std::string> l1, l2, l3;
  for (int i = 0; i < 20; ++i) l1.push_back("w" + std::to_string(i));
  for (int i = 19; i >= 5; --i) l2.push_back("w" + std::to_string(i));
  for (int i = 0; i < 12; ++i) l3.push_back("w" + std::to_string((i * 7) % 20));
  for (MechanismKind kind : {MechanismKind::kGeometric, MechanismKind::kTem1D}) {
    auto cfg = Config(MakeBank({l1, l2, l3}), 0.7, kind);
    ExpectMixtureLaw(cfg, "w7", 100000, 12);
    ExpectMixtureLaw(cfg, "w1", 100000, 13);
  }
}

TEST(PerturbTextTest, EmptyInput) {
  auto cfg = Config(MakeBank({{"a", "b"}}), 1.0);
  Rng rng = MakeStream(1, 0);
  const TextPerturbation out = PerturbText("", cfg, rng);
  EXPECT_EQ(out.text, "");
  EXPECT_THAT(out.records, IsEmpty());
}

TEST(PerturbTextTest, PunctuationPassesThrough) {
  auto cfg = Config(MakeBank({{"a", "b"}}), 0.1);
  Rng rng = MakeStream(1, 0);
  const TextPerturbation out = PerturbText(", . !", cfg, rng);
  EXPECT_EQ(out.text, ", . !");
  for (const PerturbationRecord& r : out.records) EXPECT_FALSE(r.is_word);
}

TEST(PerturbTextTest, ZeroNoiseIsIdentityOnTokens) {
  auto cfg = Config(MakeBank({{"the", "cat", "sat", "on", "mat"}}),
                    kNoiselessEpsilon);
  Rng rng = MakeStream(1, 0);
  const TextPerturbation out = PerturbText("the cat  sat on the mat.", cfg, rng);
  EXPECT_EQ(out.text, "the cat sat on the mat .");
}

TEST(PerturbTextTest, PreservesTokenCount) {
  auto cfg = Config(MakeBank({{"the", "cat", "sat", "on", "mat", "a", "dog"}}),
                    0.2);
  Rng rng = MakeStream(5, 0);
  const std::string input = "The cat, unknown-word sat on 3 mats!";
  for (int n = 0; n < 50; ++n) {
    const TextPerturbation out = PerturbText(input, cfg, rng);
    EXPECT_EQ(Tokenize(out.text).size(), Tokenize(input).size());
    EXPECT_EQ(out.records.size(), Tokenize(input).size());
  }
}

TEST(PerturbTextTest, DeterministicUnderFixedStream) {
  auto cfg = Config(MakeBank({{"a", "b", "c", "d"}, {"d", "c", "b", "a"}}), 0.3);
  Rng r1 = MakeStream(8, 1);
  Rng r2 = MakeStream(8, 1);
  EXPECT_EQ(PerturbText("a b c d a b", cfg, r1).text,
            PerturbText("a b c d a b", cfg, r2).text);
}

class DistanceTest : public ::testing::Test {
 protected:
  std::shared_ptr<const ListBank> bank_ =
      MakeBank({{"a", "b", "c", "d", "e"}, {"c", "a", "e", "b", "d"}, {"x", "a"}});
};

TEST_F(DistanceTest, MaxIndexDistanceHandComputed) {
  EXPECT_EQ(*MaxIndexDistance("a", "a", *bank_), 0u);
  EXPECT_EQ(*MaxIndexDistance("a", "e", *bank_), 4u);
  EXPECT_EQ(*MaxIndexDistance("b", "c", *bank_), 3u);
  EXPECT_EQ(*MaxIndexDistance("x", "a", *bank_), 1u);
}

TEST_F(DistanceTest, SingleListMatchesIndexDistance) {
  auto single = MakeBank({{"p", "q", "r", "s"}});
  EXPECT_EQ(*MaxIndexDistance("p", "s", *single),
            *IndexDistance(single->list(0), "p", "s"));
}

TEST_F(DistanceTest, NoCommonListIsMembershipError) {
  EXPECT_EQ(MaxIndexDistance("x", "b", *bank_).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST_F(DistanceTest, SentenceDistanceHandComputed) {
  const std::vector<std::string> s = {"a", "b", "c"};
  const std::vector<std::string> t = {"e", "c", "c"};
  EXPECT_EQ(*SentenceDistance(s, s, *bank_), 0u);
  EXPECT_EQ(*SentenceDistance(s, t, *bank_), 7u);
  const std::vector<std::string> u = {"a", "d", "c"};
  EXPECT_EQ(*SentenceDistance(s, u, *bank_), *MaxIndexDistance("b", "d", *bank_));
}

TEST_F(DistanceTest, SentenceLengthMismatchRejected) {
  const std::vector<std::string> s = {"a", "b"};
  const std::vector<std::string> t = {"a", "b", "c"};
  EXPECT_EQ(SentenceDistance(s, t, *bank_).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(SentenceDistanceTest, MatchesBruteForceOnRandomBanks) {
  std::mt19937_64 gen(31);
  for (int instance = 0; instance < 100; ++instance) {
    const int vocab = 3 + static_cast<int>(gen() % 10);
    const int lists = 1 + static_cast<int>(gen() % 3);
    std::vector<std::string> words;
    for (int i = 0; i < vocab; ++i) words.push_back("v" + std::to_string(i));
    std::vector<std::vector<std::string>> orders;
    for (int l = 0; l < lists; ++l) {
      auto order = words;
      std::shuffle(order.begin(), order.end(), gen);
      orders.push_back(order);
    }
    auto bank = MakeBank(orders);
    const int length = 1 + static_cast<int>(gen() % 6);
    std::vector<std::string> s, t;
    long expected = 0;
    for (int i = 0; i < length; ++i) {
      s.push_back(words[gen() % vocab]);
      t.push_back(words[gen() % vocab]);
      expected += ReferenceMaxDistance(*bank, s.back(), t.back());
    }
    auto got = SentenceDistance(s, t, *bank);
    ASSERT_TRUE(got.ok());
    EXPECT_EQ(static_cast<long>(*got), expected) << instance;
  }
}

}  // namespace
}  // namespace diffractor
