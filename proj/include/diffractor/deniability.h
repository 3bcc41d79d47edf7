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

// Plausible deniability statistics.
//
// N_w is the probability that a word comes back unchanged; S_w is the number
// of distinct outputs observed for it. Both are estimated by perturbing a
// uniform sample of the bank vocabulary a fixed number of times.

#ifndef DIFFRACTOR_DENIABILITY_H_
#define DIFFRACTOR_DENIABILITY_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "diffractor/diffractor.h"

namespace diffractor {

struct DeniabilityStats {
  std::string word;
  double epsilon = 0;
  std::size_t trials = 0;
  std::size_t unchanged = 0;
  double n_w = 0;
  std::size_t s_w = 0;
};

struct DeniabilityReport {
  std::vector<DeniabilityStats> words;
  double mean_n_w = 0;
  double mean_s_w = 0;
};

// Samples `sample_size` distinct words uniformly from the bank vocabulary
// union (all of them if the union is smaller) and perturbs each `trials`
// times. The sample and every word's draws come from independent streams of
// `seed`, so runs at different epsilons with one seed share their randomness
// word by word.
absl::StatusOr<DeniabilityReport> EstimateDeniability(
    const DiffractorConfig& cfg, std::size_t sample_size = 100,
    std::size_t trials = 100, uint64_t seed = 0);

// Same protocol over an explicit word sample.
absl::StatusOr<DeniabilityReport> EstimateDeniabilityFor(
    const DiffractorConfig& cfg, const std::vector<std::string>& words,
    std::size_t trials, uint64_t seed);

// Exact probability that PerturbWord returns `word` itself: the uniform
// mixture over containing lists of each list's mass on the identity index.
// kFailedPrecondition when no list contains the word.
absl::StatusOr<double> ExpectedNw(std::string_view word,
                                  const DiffractorConfig& cfg);

// Header plus one row per (word, epsilon):
// word,epsilon,mechanism,config,trials,n_w,s_w
void WriteDeniabilityCsvHeader(std::ostream& out);
void WriteDeniabilityCsvRows(std::ostream& out, const DeniabilityReport& report,
                             std::string_view mechanism,
                             std::string_view config);

}  // namespace diffractor

#endif  // DIFFRACTOR_DENIABILITY_H_
