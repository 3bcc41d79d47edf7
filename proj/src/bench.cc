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

#include "diffractor/bench.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <utility>

#include "diffractor/alloc_counter.h"
#include "diffractor/csv.h"
#include "diffractor/tokenizer.h"

namespace diffractor {
namespace {

using Clock = std::chrono::steady_clock;

double Median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

BenchReport NewReport(const BenchSubject& subject) {
  BenchReport r;
  r.mechanism = subject.mechanism;
  r.config = subject.config;
  r.epsilon = subject.epsilon;
  r.init_seconds = subject.init_seconds;
  return r;
}

void FinishRates(BenchReport& r) {
  r.wall_seconds = Median(r.repeat_seconds);
  r.tokens_per_second = r.wall_seconds > 0
                            ? static_cast<double>(r.tokens_measured) /
                                  r.wall_seconds
                            : 0.0;
  r.tokens_per_day = r.tokens_per_second * kSecondsPerDay;
}

struct CorpusToken {
  std::string text;
  bool is_word;
};

}  // namespace

BenchSubject MakeDiffractorSubject(const DiffractorConfig& cfg,
                                   double init_seconds) {
  BenchSubject s;
  s.mechanism = std::string(MechanismTag(cfg.mechanism.kind));
  s.config = cfg.bank ? std::string(BankTagName(cfg.bank->tag())) : "";
  s.epsilon = cfg.mechanism.epsilon;
  s.init_seconds = init_seconds;
  s.perturb = [cfg](std::string_view word, Rng& rng) {
    return PerturbWord(word, cfg, rng).output.size();
  };
  return s;
}

BenchSubject MakeMvcSubject(const MvcMechanism& mech, std::string config,
                            double init_seconds) {
  BenchSubject s;
  s.mechanism = "mvc";
  s.config = std::move(config);
  s.epsilon = mech.epsilon();
  s.init_seconds = init_seconds;
  s.perturb = [&mech](std::string_view word, Rng& rng) -> std::size_t {
    absl::StatusOr<std::string> out = mech.Perturb(word, rng);
    return out.ok() ? out->size() : word.size();
  };
  return s;
}

BenchReport BenchThroughput(const BenchSubject& subject,
                            const std::vector<std::string>& words,
                            std::size_t repeats, uint64_t seed) {
  BenchReport r = NewReport(subject);
  r.tokens_measured = words.size();
  Rng rng = MakeStream(seed, 0);

  for (const std::string& w : words) r.sink += subject.perturb(w, rng);
  r.warmup_passes = 1;

  for (std::size_t rep = 0; rep < std::max<std::size_t>(repeats, 1); ++rep) {
    const auto start = Clock::now();
    for (const std::string& w : words) r.sink += subject.perturb(w, rng);
    r.repeat_seconds.push_back(
        std::chrono::duration<double>(Clock::now() - start).count());
  }
  FinishRates(r);
  return r;
}

absl::StatusOr<BenchReport> BenchCorpus(const BenchSubject& subject,
                                        const std::string& corpus_path,
                                        std::size_t repeats, uint64_t seed) {
  std::ifstream in(corpus_path);
  if (!in) return absl::NotFoundError("cannot open corpus: " + corpus_path);
  std::vector<CorpusToken> tokens;
  std::string line;
  while (std::getline(in, line)) {
    for (const Token& t : Tokenize(line)) {
      tokens.push_back({std::string(t.text), t.is_word});
    }
  }
  if (in.bad()) return absl::UnavailableError("read failed: " + corpus_path);

  BenchReport r = NewReport(subject);
  r.tokens_measured = tokens.size();
  Rng rng = MakeStream(seed, 0);
  auto pass = [&] {
    for (const CorpusToken& t : tokens) {
      r.sink += t.is_word ? subject.perturb(t.text, rng) : t.text.size();
    }
  };
  pass();
  r.warmup_passes = 1;
  for (std::size_t rep = 0; rep < std::max<std::size_t>(repeats, 1); ++rep) {
    const auto start = Clock::now();
    pass();
    r.repeat_seconds.push_back(
        std::chrono::duration<double>(Clock::now() - start).count());
  }
  FinishRates(r);
  return r;
}

BenchReport BenchMemory(const BenchSubject& subject,
                        const std::vector<std::string>& words, uint64_t seed) {
  BenchReport r = NewReport(subject);
  r.tokens_measured = words.size();
  Rng rng = MakeStream(seed, 1);
  if (!words.empty()) r.sink += subject.perturb(words.front(), rng);
  r.warmup_passes = 1;

  AllocationStats stats;
  {
    AllocationScope scope;
    for (const std::string& w : words) r.sink += subject.perturb(w, rng);
    stats = scope.stats();
  }
  r.total_memory_bytes = stats.allocated_bytes;
  r.per_word_memory_bytes =
      words.empty() ? 0.0
                    : static_cast<double>(stats.allocated_bytes) /
                          static_cast<double>(words.size());
  r.peak_extra_memory_bytes = stats.peak_live_bytes;
  return r;
}

BenchReport BenchWords(const BenchSubject& subject,
                       const std::vector<std::string>& words,
                       std::size_t repeats, uint64_t seed) {
  BenchReport r = BenchThroughput(subject, words, repeats, seed);
  const BenchReport mem = BenchMemory(subject, words, seed);
  r.total_memory_bytes = mem.total_memory_bytes;
  r.per_word_memory_bytes = mem.per_word_memory_bytes;
  r.peak_extra_memory_bytes = mem.peak_extra_memory_bytes;
  r.sink += mem.sink;
  return r;
}

std::vector<std::string> SampleWords(std::vector<std::string> vocab,
                                     std::size_t count, uint64_t seed) {
  const std::size_t n = std::min(count, vocab.size());
  Rng rng = MakeStream(seed, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(UniformIndex(rng, vocab.size() - i));
    std::swap(vocab[i], vocab[j]);
  }
  vocab.resize(n);
  return vocab;
}

void WriteBenchCsvHeader(std::ostream& out) {
  out << "mechanism,config,epsilon,tokens,wall_s,tok_per_s,tok_per_day,"
         "init_s,total_mem_bytes,per_word_mem_bytes\n";
}

void WriteBenchCsvRow(std::ostream& out, const BenchReport& r) {
  out << CsvField(r.mechanism) << ',' << CsvField(r.config) << ','
      << FormatDouble(r.epsilon) << ',' << r.tokens_measured << ','
      << FormatDouble(r.wall_seconds) << ','
      << FormatDouble(r.tokens_per_second) << ','
      << FormatDouble(r.tokens_per_day) << ','
      << FormatDouble(r.init_seconds) << ',' << r.total_memory_bytes << ','
      << FormatDouble(r.per_word_memory_bytes) << '\n';
}

}  // namespace diffractor
