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

#ifndef DIFFRACTOR_WORD_LIST_H_
#define DIFFRACTOR_WORD_LIST_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "diffractor/embedding_model.h"
#include "diffractor/word_index.h"

namespace diffractor {

enum class NeighborBackend {
  // Linear scan over the remaining words at every step. Ties go to the
  // smallest original vocabulary index.
  kExact,
  // Precomputed k-nearest-neighbor candidate lists (single-precision GEMM
  // shortlist, re-ranked in double precision) with an exact-scan fallback
  // once all of a word's candidates are used.
  kApproximate,
};

std::string_view BackendTag(NeighborBackend backend);
std::optional<NeighborBackend> ParseBackend(std::string_view tag);

struct WordListMeta {
  std::string model_name;
  std::string seed_word;
  uint64_t master_seed = 0;
  std::string metric = "euclidean";
  std::string backend = "exact";
  // FNV-1a of the word sequence, computed when the list is created.
  uint64_t checksum = 0;

  friend bool operator==(const WordListMeta&, const WordListMeta&) = default;
};

// An ordered permutation of a vocabulary. Position i holds the word whose
// one-dimensional embedding is i; IndexOf is the exact inverse.
class WordList {
 public:
  // Fails with kInvalidArgument if `words` is empty or has duplicates. If
  // meta.checksum is zero it is filled in from `words`.
  static absl::StatusOr<WordList> FromWords(std::vector<std::string> words,
                                            WordListMeta meta = {});

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& WordAt(std::size_t index) const { return words_[index]; }
  std::optional<std::size_t> IndexOf(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool Contains(std::string_view word) const { return index_.contains(word); }
  const WordListMeta& meta() const { return meta_; }

  friend bool operator==(const WordList& a, const WordList& b) {
    return a.words_ == b.words_ && a.meta_ == b.meta_;
  }

 private:
  std::vector<std::string> words_;
  WordIndex index_;
  WordListMeta meta_;
};

uint64_t WordSequenceChecksum(const std::vector<std::string>& words);

struct BuildOptions {
  NeighborBackend backend = NeighborBackend::kExact;
  // Candidate list length for the approximate backend.
  std::size_t candidates = 32;
};

// Greedy nearest-neighbor chaining: start from a seed word drawn uniformly
// with `rng_seed`, then repeatedly append the Euclidean-nearest word not yet
// in the list. Deterministic for a given (model, rng_seed, exact backend).
absl::StatusOr<WordList> BuildWordList(const EmbeddingModel& model,
                                       uint64_t rng_seed,
                                       const BuildOptions& options = {});

// Same as above with an explicit starting word.
absl::StatusOr<WordList> BuildWordListFrom(const EmbeddingModel& model,
                                           std::size_t seed_index,
                                           uint64_t rng_seed,
                                           const BuildOptions& options = {});

// File layout: a one-line JSON metadata record, one token per line in index
// order, then a trailing "#checksum <16 hex digits>" line covering every byte
// before it.
absl::Status SaveWordList(const WordList& list, const std::string& path);

// Errors: kNotFound if unreadable; kInvalidArgument for a malformed header or
// duplicate tokens; kDataLoss for a missing or mismatched checksum record.
absl::StatusOr<WordList> LoadWordList(const std::string& path);

// |index_of(a) - index_of(b)|. kFailedPrecondition if either word is absent.
absl::StatusOr<std::size_t> IndexDistance(const WordList& list,
                                          std::string_view a,
                                          std::string_view b);

}  // namespace diffractor

#endif  // DIFFRACTOR_WORD_LIST_H_
