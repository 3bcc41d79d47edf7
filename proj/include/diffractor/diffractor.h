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

// Word and text perturbation through a bank of one-dimensional word lists.
//
// A word is pushed through the index mechanism of every list that contains
// it, and exactly one of the per-list outputs is released, chosen uniformly.
// Releasing a single output means the bank costs no more privacy budget than
// one list; the bound between two words becomes epsilon * d_max.

#ifndef DIFFRACTOR_DIFFRACTOR_H_
#define DIFFRACTOR_DIFFRACTOR_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/inlined_vector.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "diffractor/mechanisms.h"
#include "diffractor/rng.h"
#include "diffractor/word_list.h"

namespace diffractor {

// L0: one list per embedding model. L1: two lists per model. L2: a single
// list from a single model.
enum class BankTag { kL0, kL1, kL2, kCustom };

std::string_view BankTagName(BankTag tag);
std::optional<BankTag> ParseBankTag(std::string_view name);

class ListBank {
 public:
  // (list position, index of the word in that list)
  using Membership = absl::InlinedVector<std::pair<std::size_t, std::size_t>, 12>;

  // kInvalidArgument when `lists` is empty.
  static absl::StatusOr<ListBank> Create(std::vector<WordList> lists,
                                         BankTag tag = BankTag::kCustom);

  std::size_t size() const { return lists_.size(); }
  const WordList& list(std::size_t i) const { return lists_[i]; }
  const std::vector<WordList>& lists() const { return lists_; }
  BankTag tag() const { return tag_; }

  // Lists containing `word`, in bank order.
  Membership Containing(std::string_view word) const;
  bool ContainsAnywhere(std::string_view word) const;

  // Distinct words over all lists: list order, then index order.
  std::vector<std::string> VocabularyUnion() const;

 private:
  std::vector<WordList> lists_;
  BankTag tag_ = BankTag::kCustom;
};

enum class OovPolicy { kPassthrough, kDrop };
// kLowercase looks words up ASCII-folded. kPreserveAttempt tries the word as
// written first and falls back to the folded form. Output casing is never
// restored.
enum class CasePolicy { kLowercase, kPreserveAttempt };

struct DiffractorConfig {
  MechanismConfig mechanism;
  std::shared_ptr<const ListBank> bank;
  OovPolicy oov_policy = OovPolicy::kPassthrough;
  CasePolicy case_policy = CasePolicy::kLowercase;
  // Keep every per-list candidate in the record. Diagnostics only: the
  // candidates other than the released one must not be published.
  bool debug_candidates = false;

  absl::Status Validate() const;
};

struct Candidate {
  std::size_t list;
  std::string word;
};

struct PerturbationRecord {
  std::string original;
  // Empty when an OOV word is dropped.
  std::string output;
  std::optional<std::size_t> chosen_list;
  bool was_oov = false;
  // False for punctuation and numeric tokens, which pass through untouched.
  bool is_word = true;
  // Number of lists that contained the word.
  std::size_t lists_considered = 0;
  std::vector<Candidate> candidates;
};

// Runs the mechanism on every list containing `word` and releases one of the
// outputs uniformly at random. OOV words follow cfg.oov_policy.
PerturbationRecord PerturbWord(std::string_view word,
                               const DiffractorConfig& cfg, Rng& rng);

struct TextPerturbation {
  // Output tokens joined by single spaces; the input spacing is not kept.
  std::string text;
  std::vector<PerturbationRecord> records;
};

// Tokenizes `text` and perturbs each word independently. With the passthrough
// policy the output has exactly as many tokens as the input.
TextPerturbation PerturbText(std::string_view text,
                             const DiffractorConfig& cfg, Rng& rng);

// Largest index distance between the two words over the lists holding both.
// kFailedPrecondition when no list holds both.
absl::StatusOr<std::size_t> MaxIndexDistance(std::string_view a,
                                             std::string_view b,
                                             const ListBank& bank);

// Sum of MaxIndexDistance over aligned positions. kInvalidArgument when the
// sentences differ in length.
absl::StatusOr<std::size_t> SentenceDistance(std::span<const std::string> a,
                                             std::span<const std::string> b,
                                             const ListBank& bank);

}  // namespace diffractor

#endif  // DIFFRACTOR_DIFFRACTOR_H_
