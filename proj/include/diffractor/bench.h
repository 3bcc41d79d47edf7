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

// Throughput and memory measurement for perturbation mechanisms.
//
// Initialization (building or loading lists, loading the model) happens
// before a subject is handed to these functions and is reported separately
// in init_seconds. Every measurement starts with an untimed warm-up pass.

#ifndef DIFFRACTOR_BENCH_H_
#define DIFFRACTOR_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "diffractor/diffractor.h"
#include "diffractor/mvc.h"
#include "diffractor/rng.h"

namespace diffractor {

inline constexpr double kSecondsPerDay = 86400.0;

struct BenchSubject {
  std::string mechanism;
  std::string config;
  double epsilon = 0;
  double init_seconds = 0;
  // Perturbs one word and returns the output length, which the harness folds
  // into a checksum so the call cannot be optimized away.
  std::function<std::size_t(std::string_view, Rng&)> perturb;
};

// `cfg` is copied into the subject.
BenchSubject MakeDiffractorSubject(const DiffractorConfig& cfg,
                                   double init_seconds);
// Out-of-vocabulary words pass through. `mech` must outlive the subject.
BenchSubject MakeMvcSubject(const MvcMechanism& mech, std::string config,
                            double init_seconds);

struct BenchReport {
  std::string mechanism;
  std::string config;
  double epsilon = 0;
  std::size_t tokens_measured = 0;
  std::size_t warmup_passes = 0;
  std::vector<double> repeat_seconds;
  // Median over repeat_seconds.
  double wall_seconds = 0;
  double tokens_per_second = 0;
  // tokens_per_second * 86400, exactly.
  double tokens_per_day = 0;
  double init_seconds = 0;
  // Heap bytes allocated by the perturbation calls of one pass.
  uint64_t total_memory_bytes = 0;
  double per_word_memory_bytes = 0;
  int64_t peak_extra_memory_bytes = 0;
  uint64_t sink = 0;
};

// Times `repeats` passes over `words` after one warm-up pass and reports the
// median, extrapolated to a day.
BenchReport BenchThroughput(const BenchSubject& subject,
                            const std::vector<std::string>& words,
                            std::size_t repeats = 5, uint64_t seed = 0);

// Tokenizes the corpus up front, then times perturbation of every token
// (punctuation and numbers pass through but still count as tokens).
// kNotFound when the file cannot be read.
absl::StatusOr<BenchReport> BenchCorpus(const BenchSubject& subject,
                                        const std::string& corpus_path,
                                        std::size_t repeats = 5,
                                        uint64_t seed = 0);

// Counts heap allocations made while perturbing `words` once, after a
// warm-up call.
BenchReport BenchMemory(const BenchSubject& subject,
                        const std::vector<std::string>& words,
                        uint64_t seed = 0);

// Throughput and memory over the same word sample, merged in one report.
BenchReport BenchWords(const BenchSubject& subject,
                       const std::vector<std::string>& words,
                       std::size_t repeats = 5, uint64_t seed = 0);

// Uniform sample of `count` distinct words (fewer if `vocab` is smaller).
std::vector<std::string> SampleWords(std::vector<std::string> vocab,
                                     std::size_t count, uint64_t seed);

void WriteBenchCsvHeader(std::ostream& out);
void WriteBenchCsvRow(std::ostream& out, const BenchReport& report);

}  // namespace diffractor

#endif  // DIFFRACTOR_BENCH_H_
