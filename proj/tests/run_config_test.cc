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

#include "diffractor/run_config.h"

#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace diffractor {
namespace {

using ::diffractor::testing::TempDir;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(ParseRunConfigTest, ReadsEveryKey) {
  const std::string text = R"(
# experiment manifest
mechanism = tem
epsilon = 2.5
beta = 0.01
models = a.txt, /abs/b.txt
seeds = 3, 4
limit = 1000
lowercase = false
backend = approx
config = L1
oov_policy = drop
case_policy = preserve
master_seed = 42   # trailing comment
mvc_model = c.txt
)";
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(c, ParseRunConfig(text, "/base"));
  EXPECT_EQ(c.mechanism, MechanismKind::kTem1D);
  EXPECT_EQ(c.epsilon, 2.5);
  EXPECT_EQ(c.beta, 0.01);
  EXPECT_THAT(c.model_paths, ElementsAre("/base/a.txt", "/abs/b.txt"));
  EXPECT_THAT(c.seeds, ElementsAre(3u, 4u));
  EXPECT_EQ(c.limit, 1000u);
  EXPECT_FALSE(c.lowercase);
  EXPECT_EQ(c.backend, NeighborBackend::kApproximate);
  EXPECT_EQ(c.config_tag, BankTag::kL1);
  EXPECT_EQ(c.oov_policy, OovPolicy::kDrop);
  EXPECT_EQ(c.case_policy, CasePolicy::kPreserveAttempt);
  EXPECT_EQ(c.master_seed, 42u);
  EXPECT_EQ(c.mvc_model, "/base/c.txt");

  const MechanismConfig m = c.Mechanism();
  EXPECT_EQ(m.kind, MechanismKind::kTem1D);
  EXPECT_EQ(m.epsilon, 2.5);
  EXPECT_EQ(m.beta, 0.01);
}

TEST(ParseRunConfigTest, DefaultsWithListsOnly) {
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(c, ParseRunConfig("lists = x.list\n"));
  EXPECT_EQ(c.mechanism, MechanismKind::kGeometric);
  EXPECT_EQ(c.epsilon, 1.0);
  EXPECT_EQ(c.Mechanism().beta, kDefaultTemBeta);
  EXPECT_THAT(c.list_paths, ElementsAre("x.list"));
  EXPECT_EQ(c.oov_policy, OovPolicy::kPassthrough);
}

TEST(ParseRunConfigTest, ReportsAllOffendingFields) {
  auto c = ParseRunConfig(
      "epsilon = -3\nmechanism = laplace\ncolour = blue\nseeds = 1, x\n"
      "just text\n");
  ASSERT_EQ(c.status().code(), absl::StatusCode::kInvalidArgument);
  const std::string msg(c.status().message());
  EXPECT_THAT(msg, HasSubstr("epsilon"));
  EXPECT_THAT(msg, HasSubstr("mechanism"));
  EXPECT_THAT(msg, HasSubstr("colour"));
  EXPECT_THAT(msg, HasSubstr("seeds"));
  EXPECT_THAT(msg, HasSubstr("line 5"));
  EXPECT_THAT(msg, HasSubstr("lists"));
}

TEST(ParseRunConfigTest, RequiresListSource) {
  EXPECT_EQ(ParseRunConfig("epsilon = 1\n").status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ParseRunConfigTest, RejectsBadBeta) {
  EXPECT_EQ(ParseRunConfig("lists = a\nbeta = 0.7\n").status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(LoadRunConfigTest, ResolvesPathsAgainstConfigDirectory) {
  TempDir dir;
  const std::string path = dir.Write("run.cfg", "lists = l1.txt\n");
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(c, LoadRunConfig(path));
  EXPECT_THAT(c.list_paths, ElementsAre(dir.File("l1.txt")));
}

TEST(LoadRunConfigTest, MissingFileIsNotFound) {
  EXPECT_EQ(LoadRunConfig("/no/such/run.cfg").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(LoadBankTest, BuildsOneListPerModelAndSeed) {
  TempDir dir;
  std::string text;
  const auto points = testing::RandomPoints(30, 4, 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    text += "W" + std::to_string(i);
    for (float x : points[i]) text += " " + std::to_string(x);
    text += "\n";
  }
  dir.Write("m1.txt", text);
  dir.Write("m2.txt", text);
  const std::string cfg_path = dir.Write(
      "run.cfg", "models = m1.txt, m2.txt\nseeds = 1, 2\nlimit = 20\nconfig = L1\n");
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(c, LoadRunConfig(cfg_path));
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(loaded, LoadBank(c));
  ASSERT_EQ(loaded.bank->size(), 4u);
  EXPECT_EQ(loaded.bank->tag(), BankTag::kL1);
  EXPECT_GE(loaded.init_seconds, 0.0);
  for (const WordList& l : loaded.bank->lists()) {
    EXPECT_EQ(l.size(), 20u);
    EXPECT_TRUE(l.Contains("w0"));  // lowercase by default
  }
  EXPECT_EQ(loaded.bank->list(0).meta().master_seed, 1u);
  EXPECT_EQ(loaded.bank->list(1).meta().master_seed, 2u);
  EXPECT_EQ(loaded.bank->list(2).meta().model_name, "m2.txt");

  const DiffractorConfig cfg = MakeDiffractorConfig(c, loaded.bank);
  EXPECT_TRUE(cfg.Validate().ok());
}

TEST(LoadBankTest, LoadsSavedLists) {
  TempDir dir;
  auto list = *WordList::FromWords({"a", "b", "c"});
  ASSERT_TRUE(SaveWordList(list, dir.File("x.list")).ok());
  const std::string cfg_path = dir.Write("run.cfg", "lists = x.list\n");
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(c, LoadRunConfig(cfg_path));
  DIFFRACTOR_ASSERT_OK_AND_ASSIGN(loaded, LoadBank(c));
  EXPECT_EQ(loaded.bank->list(0), list);
}

TEST(LoadBankTest, PropagatesMissingList) {
  RunConfig c;
  c.list_paths = {"/no/such.list"};
  EXPECT_EQ(LoadBank(c).status().code(), absl::StatusCode::kNotFound);
}

}  // namespace
}  // namespace diffractor
