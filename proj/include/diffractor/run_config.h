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

// Experiment manifests for the command-line tool.
//
// The file format is flat "key = value" lines; '#' starts a comment. Lists
// are comma-separated. Relative paths resolve against the config file's
// directory.
//
//   mechanism   = geometric | tem
//   epsilon     = 1.0
//   beta        = 0.001            # tem only
//   lists       = a.list, b.list   # prebuilt list files, or
//   models      = e1.txt, e2.txt   # embedding files to build lists from
//   seeds       = 1, 2             # one list per (model, seed)
//   limit       = 50000            # vocabulary prefix per model
//   lowercase   = true
//   backend     = exact | approx
//   config      = L0 | L1 | L2 | custom
//   oov_policy  = passthrough | drop
//   case_policy = lowercase | preserve
//   master_seed = 42
//   mvc_model   = e1.txt           # baseline model for bench, default models[0]

#ifndef DIFFRACTOR_RUN_CONFIG_H_
#define DIFFRACTOR_RUN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "diffractor/diffractor.h"
#include "diffractor/word_list.h"

namespace diffractor {

struct RunConfig {
  MechanismKind mechanism = MechanismKind::kGeometric;
  double epsilon = 1.0;
  std::optional<double> beta;
  std::vector<std::string> list_paths;
  std::vector<std::string> model_paths;
  std::vector<uint64_t> seeds = {0};
  std::optional<std::size_t> limit;
  bool lowercase = true;
  NeighborBackend backend = NeighborBackend::kExact;
  BankTag config_tag = BankTag::kCustom;
  OovPolicy oov_policy = OovPolicy::kPassthrough;
  CasePolicy case_policy = CasePolicy::kLowercase;
  uint64_t master_seed = 0;
  std::string mvc_model;

  MechanismConfig Mechanism() const;
};

// Parses manifest text. Every offending key is reported in one
// kInvalidArgument status. `base_dir` anchors relative paths.
absl::StatusOr<RunConfig> ParseRunConfig(const std::string& text,
                                         const std::string& base_dir = "");

// kNotFound if the file cannot be read, otherwise as ParseRunConfig.
absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path);

// Cross-field checks, run again after command-line overrides.
absl::Status ValidateRunConfig(const RunConfig& config);

struct LoadedBank {
  std::shared_ptr<const ListBank> bank;
  // Wall time spent loading or building the lists.
  double init_seconds = 0;
};

// Loads list files, or builds one list per (model, seed) pair.
absl::StatusOr<LoadedBank> LoadBank(const RunConfig& config);

DiffractorConfig MakeDiffractorConfig(const RunConfig& config,
                                      std::shared_ptr<const ListBank> bank);

}  // namespace diffractor

#endif  // DIFFRACTOR_RUN_CONFIG_H_
