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

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "diffractor/csv.h"

namespace diffractor {

absl::StatusOr<DeniabilityReport> EstimateDeniability(
    const DiffractorConfig& cfg, std::size_t sample_size, std::size_t trials,
    uint64_t seed) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  std::vector<std::string> vocab = cfg.bank->VocabularyUnion();
  if (vocab.empty()) {
    return absl::FailedPreconditionError("bank vocabulary is empty");
  }
  const std::size_t n = std::min(sample_size, vocab.size());
  Rng rng = MakeStream(seed, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(UniformIndex(rng, vocab.size() - i));
    std::swap(vocab[i], vocab[j]);
  }
  vocab.resize(n);
  return EstimateDeniabilityFor(cfg, vocab, trials, seed);
}

absl::StatusOr<DeniabilityReport> EstimateDeniabilityFor(
    const DiffractorConfig& cfg, const std::vector<std::string>& words,
    std::size_t trials, uint64_t seed) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  if (trials == 0) return absl::InvalidArgumentError("trials must be positive");

  // Sampled words are vocabulary entries already; look them up verbatim.
  DiffractorConfig eval = cfg;
  eval.case_policy = CasePolicy::kPreserveAttempt;
  eval.debug_candidates = false;

  DeniabilityReport report;
  report.words.reserve(words.size());
  std::unordered_set<std::string> outputs;
  for (std::size_t k = 0; k < words.size(); ++k) {
    Rng rng = MakeStream(seed, k + 1);
    outputs.clear();
    DeniabilityStats stats;
    stats.word = words[k];
    stats.epsilon = cfg.mechanism.epsilon;
    stats.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
      PerturbationRecord r = PerturbWord(words[k], eval, rng);
      if (r.output == words[k]) ++stats.unchanged;
      outputs.insert(std::move(r.output));
    }
    stats.n_w = static_cast<double>(stats.unchanged) /
                static_cast<double>(trials);
    stats.s_w = outputs.size();
    report.mean_n_w += stats.n_w;
    report.mean_s_w += static_cast<double>(stats.s_w);
    report.words.push_back(std::move(stats));
  }
  if (!report.words.empty()) {
    report.mean_n_w /= static_cast<double>(report.words.size());
    report.mean_s_w /= static_cast<double>(report.words.size());
  }
  return report;
}

absl::StatusOr<double> ExpectedNw(std::string_view word,
                                  const DiffractorConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  ListBank::Membership members;
  if (cfg.case_policy == CasePolicy::kPreserveAttempt) {
    members = cfg.bank->Containing(word);
  }
  if (members.empty()) members = cfg.bank->Containing(AsciiLower(word));
  if (members.empty()) {
    return absl::FailedPreconditionError("word in no list: '" +
                                         std::string(word) + "'");
  }
  double total = 0;
  for (const auto& [l, index] : members) {
    total += PmfAt(cfg.mechanism, index, index, cfg.bank->list(l).size());
  }
  return total / static_cast<double>(members.size());
}

void WriteDeniabilityCsvHeader(std::ostream& out) {
  out << "word,epsilon,mechanism,config,trials,n_w,s_w\n";
}

void WriteDeniabilityCsvRows(std::ostream& out, const DeniabilityReport& report,
                             std::string_view mechanism,
                             std::string_view config) {
  for (const DeniabilityStats& s : report.words) {
    out << CsvField(s.word) << ',' << FormatDouble(s.epsilon) << ','
        << CsvField(mechanism) << ',' << CsvField(config) << ',' << s.trials
        << ',' << FormatDouble(s.n_w) << ',' << s.s_w << '\n';
  }
}

}  // namespace diffractor
