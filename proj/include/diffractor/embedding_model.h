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

#ifndef DIFFRACTOR_EMBEDDING_MODEL_H_
#define DIFFRACTOR_EMBEDDING_MODEL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "diffractor/word_index.h"

namespace diffractor {

struct EmbeddingLoadOptions {
  // Keep at most this many words, in file order. Files of this kind are
  // conventionally sorted by frequency, so a prefix is a sensible vocabulary.
  std::optional<std::size_t> limit;
  // ASCII case folding; the first occurrence of a folded duplicate wins.
  bool lowercase = false;
  // Defaults to the file's base name.
  std::string name;
};

// A vocabulary with one dense vector per word. Immutable after construction
// and safe to share between threads.
class EmbeddingModel {
 public:
  using Matrix =
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  // Reads the plain-text format: an optional "count dim" header line, then one
  // line per word holding the token followed by `dim` decimal floats.
  //
  // Errors:
  //   kNotFound / kUnavailable  file cannot be opened or read
  //   kInvalidArgument          unparseable value, wrong value count, dim
  //                             mismatch against the header, NaN or Inf
  //   kFailedPrecondition       fewer than two usable rows
  static absl::StatusOr<EmbeddingModel> Load(
      const std::string& path, const EmbeddingLoadOptions& options = {});

  // Builds a model from an in-memory row-major matrix of words.size() * dim
  // values. Duplicate words keep their first row.
  static absl::StatusOr<EmbeddingModel> FromVectors(
      std::string name, std::vector<std::string> words,
      std::span<const float> values, std::size_t dim, bool lowercase = false);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  std::size_t size() const { return words_.size(); }
  bool lowercase() const { return lowercase_; }

  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t i) const { return words_[i]; }
  const Matrix& vectors() const { return vectors_; }
  std::span<const float> row(std::size_t i) const {
    return {vectors_.data() + i * dim(), dim()};
  }

  // Row index of `word` after applying the model's normalization policy.
  std::optional<std::size_t> IndexOf(std::string_view word) const;

  // The vector of `word`, or nullopt when out of vocabulary.
  std::optional<std::span<const float>> VectorOf(std::string_view word) const;

 private:
  EmbeddingModel() = default;

  std::string name_;
  bool lowercase_ = false;
  std::vector<std::string> words_;
  WordIndex index_;
  Matrix vectors_;
};

}  // namespace diffractor

#endif  // DIFFRACTOR_EMBEDDING_MODEL_H_
