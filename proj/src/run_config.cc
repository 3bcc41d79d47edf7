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

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>

namespace diffractor {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view item = Trim(s.substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool ParseNumber(std::string_view s, T* out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::optional<bool> ParseBool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  return std::nullopt;
}

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (base_dir.empty() || std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(base_dir) / path).string();
}

}  // namespace

MechanismConfig RunConfig::Mechanism() const {
  MechanismConfig m;
  m.kind = mechanism;
  m.epsilon = epsilon;
  m.beta = beta.value_or(kDefaultTemBeta);
  m.rng_seed = master_seed;
  return m;
}

absl::StatusOr<RunConfig> ParseRunConfig(const std::string& text,
                                         const std::string& base_dir) {
  RunConfig c;
  std::vector<std::string> problems;
  auto bad = [&](std::string_view key, const std::string& why) {
    problems.push_back(std::string(key) + ": " + why);
  };

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      bad("line " + std::to_string(line_no), "expected key = value");
      continue;
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));

    if (key == "mechanism") {
      if (auto m = ParseMechanism(value)) {
        c.mechanism = *m;
      } else {
        bad(key, "expected geometric or tem");
      }
    } else if (key == "epsilon") {
      if (!ParseNumber(value, &c.epsilon)) bad(key, "not a number");
    } else if (key == "beta") {
      double b = 0;
      if (ParseNumber(value, &b)) {
        c.beta = b;
      } else {
        bad(key, "not a number");
      }
    } else if (key == "lists") {
      c.list_paths.clear();
      for (std::string& p : SplitList(value)) {
        c.list_paths.push_back(Resolve(base_dir, p));
      }
    } else if (key == "models") {
      c.model_paths.clear();
      for (std::string& p : SplitList(value)) {
        c.model_paths.push_back(Resolve(base_dir, p));
      }
    } else if (key == "seeds") {
      c.seeds.clear();
      for (const std::string& s : SplitList(value)) {
        uint64_t seed = 0;
        if (ParseNumber(std::string_view(s), &seed)) {
          c.seeds.push_back(seed);
        } else {
          bad(key, "not an integer: '" + s + "'");
        }
      }
    } else if (key == "limit") {
      std::size_t limit = 0;
      if (ParseNumber(value, &limit) && limit > 0) {
        c.limit = limit;
      } else {
        bad(key, "expected a positive integer");
      }
    } else if (key == "lowercase") {
      if (auto b = ParseBool(value)) {
        c.lowercase = *b;
      } else {
        bad(key, "expected true or false");
      }
    } else if (key == "backend") {
      if (auto b = ParseBackend(value)) {
        c.backend = *b;
      } else {
        bad(key, "expected exact or approx");
      }
    } else if (key == "config") {
      if (auto t = ParseBankTag(value)) {
        c.config_tag = *t;
      } else {
        bad(key, "expected L0, L1, L2 or custom");
      }
    } else if (key == "oov_policy") {
      if (value == "passthrough") {
        c.oov_policy = OovPolicy::kPassthrough;
      } else if (value == "drop") {
        c.oov_policy = OovPolicy::kDrop;
      } else {
        bad(key, "expected passthrough or drop");
      }
    } else if (key == "case_policy") {
      if (value == "lowercase") {
        c.case_policy = CasePolicy::kLowercase;
      } else if (value == "preserve" || value == "preserve-attempt") {
        c.case_policy = CasePolicy::kPreserveAttempt;
      } else {
        bad(key, "expected lowercase or preserve");
      }
    } else if (key == "master_seed") {
      if (!ParseNumber(value, &c.master_seed)) bad(key, "not an integer");
    } else if (key == "mvc_model") {
      c.mvc_model = Resolve(base_dir, std::string(value));
    } else {
      bad(key, "unknown key");
    }
  }

  if (absl::Status s = ValidateRunConfig(c); !s.ok()) {
    problems.emplace_back(s.message());
  }
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& p : problems) msg += "\n  " + p;
    return absl::InvalidArgumentError(msg);
  }
  return c;
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ParseRunConfig(text,
                        std::filesystem::path(path).parent_path().string());
}

absl::Status ValidateRunConfig(const RunConfig& c) {
  std::vector<std::string> problems;
  if (!(c.epsilon > 0) || !std::isfinite(c.epsilon)) {
    problems.push_back("epsilon: must be > 0");
  }
  if (c.beta && !(*c.beta > 0 && *c.beta < 0.5)) {
    problems.push_back("beta: must lie in (0, 0.5)");
  }
  if (c.list_paths.empty() && c.model_paths.empty()) {
    problems.push_back("lists: need at least one of lists or models");
  }
  if (!c.model_paths.empty() && c.list_paths.empty() && c.seeds.empty()) {
    problems.push_back("seeds: need at least one seed to build lists");
  }
  if (problems.empty()) return absl::OkStatus();
  std::string msg;
  for (const std::string& p : problems) {
    if (!msg.empty()) msg += "\n  ";
    msg += p;
  }
  return absl::InvalidArgumentError(msg);
}

absl::StatusOr<LoadedBank> LoadBank(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<WordList> lists;
  if (!config.list_paths.empty()) {
    for (const std::string& path : config.list_paths) {
      absl::StatusOr<WordList> list = LoadWordList(path);
      if (!list.ok()) return list.status();
      lists.push_back(*std::move(list));
    }
  } else {
    for (const std::string& path : config.model_paths) {
      EmbeddingLoadOptions options;
      options.limit = config.limit;
      options.lowercase = config.lowercase;
      absl::StatusOr<EmbeddingModel> model = EmbeddingModel::Load(path, options);
      if (!model.ok()) return model.status();
      for (uint64_t seed : config.seeds) {
        BuildOptions build;
        build.backend = config.backend;
        absl::StatusOr<WordList> list = BuildWordList(*model, seed, build);
        if (!list.ok()) return list.status();
        lists.push_back(*std::move(list));
      }
    }
  }
  absl::StatusOr<ListBank> bank =
      ListBank::Create(std::move(lists), config.config_tag);
  if (!bank.ok()) return bank.status();
  LoadedBank out;
  out.bank = std::make_shared<const ListBank>(*std::move(bank));
  out.init_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

DiffractorConfig MakeDiffractorConfig(const RunConfig& config,
                                      std::shared_ptr<const ListBank> bank) {
  DiffractorConfig cfg;
  cfg.mechanism = config.Mechanism();
  cfg.bank = std::move(bank);
  cfg.oov_policy = config.oov_policy;
  cfg.case_policy = config.case_policy;
  return cfg;
}

}  // namespace diffractor
