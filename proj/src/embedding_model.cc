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

#include "diffractor/embedding_model.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>

#include "absl/status/status.h"

namespace diffractor {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

// Splits on runs of ASCII whitespace.
std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool ParseSize(std::string_view s, std::size_t* out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseFloat(std::string_view s, float* out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string LineError(const std::string& path, std::size_t line,
                      const std::string& what) {
  return path + ":" + std::to_string(line) + ": " + what;
}

// Accumulates rows while applying the normalization and dedup policy.
class ModelAccumulator {
 public:
  explicit ModelAccumulator(bool lowercase) : lowercase_(lowercase) {}

  // Returns false when the (normalized) word was already present.
  bool Add(std::string_view token, std::span<const float> values) {
    std::string word = lowercase_ ? AsciiLower(token) : std::string(token);
    if (index_.contains(word)) return false;
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    values_.insert(values_.end(), values.begin(), values.end());
    return true;
  }

  std::size_t size() const { return words_.size(); }

  std::vector<std::string> words_;
  WordIndex index_;
  std::vector<float> values_;

 private:
  bool lowercase_;
};

}  // namespace

absl::StatusOr<EmbeddingModel> EmbeddingModel::Load(
    const std::string& path, const EmbeddingLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError("cannot open embedding file: " + path);
  }

  ModelAccumulator acc(options.lowercase);
  std::vector<float> row;
  std::size_t dim = 0;
  bool dim_from_header = false;
  std::size_t line_no = 0;
  std::string line;

  while ((!options.limit || acc.size() < *options.limit) &&
         std::getline(in, line)) {
    ++line_no;
    std::vector<std::string_view> fields = SplitFields(line);
    if (fields.empty()) continue;

    if (line_no == 1 && fields.size() == 2) {
      std::size_t count = 0;
      std::size_t header_dim = 0;
      if (ParseSize(fields[0], &count) && ParseSize(fields[1], &header_dim)) {
        if (header_dim == 0) {
          return absl::InvalidArgumentError(
              LineError(path, line_no, "format error: header dim is zero"));
        }
        dim = header_dim;
        dim_from_header = true;
        continue;
      }
    }

    const std::size_t got = fields.size() - 1;
    if (dim == 0) {
      if (got == 0) {
        return absl::InvalidArgumentError(
            LineError(path, line_no, "parse error: token without values"));
      }
      dim = got;
    }
    if (got != dim) {
      const std::string what =
          dim_from_header
              ? "format error: header declares dim " + std::to_string(dim) +
                    " but row has " + std::to_string(got) + " values"
              : "parse error: expected " + std::to_string(dim) +
                    " values, got " + std::to_string(got);
      return absl::InvalidArgumentError(LineError(path, line_no, what));
    }

    row.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!ParseFloat(fields[j + 1], &row[j])) {
        return absl::InvalidArgumentError(LineError(
            path, line_no,
            "parse error: bad value '" + std::string(fields[j + 1]) + "'"));
      }
      if (!std::isfinite(row[j])) {
        return absl::InvalidArgumentError(
            LineError(path, line_no, "non-finite vector entry"));
      }
    }
    acc.Add(fields[0], row);
  }
  if (in.bad()) {
    return absl::UnavailableError("read failed: " + path);
  }

  if (acc.size() == 0) {
    return absl::FailedPreconditionError("empty model: no usable rows in " +
                                         path);
  }
  if (acc.size() < 2) {
    return absl::FailedPreconditionError(
        "model needs at least two words: " + path);
  }

  EmbeddingModel model;
  model.name_ = options.name.empty()
                    ? std::filesystem::path(path).filename().string()
                    : options.name;
  model.lowercase_ = options.lowercase;
  model.vectors_ = Eigen::Map<const Matrix>(
      acc.values_.data(), static_cast<Eigen::Index>(acc.size()),
      static_cast<Eigen::Index>(dim));
  model.words_ = std::move(acc.words_);
  model.index_ = std::move(acc.index_);
  return model;
}

absl::StatusOr<EmbeddingModel> EmbeddingModel::FromVectors(
    std::string name, std::vector<std::string> words,
    std::span<const float> values, std::size_t dim, bool lowercase) {
  if (dim == 0) return absl::InvalidArgumentError("dim must be positive");
  if (values.size() != words.size() * dim) {
    return absl::InvalidArgumentError(
        "expected " + std::to_string(words.size() * dim) + " values, got " +
        std::to_string(values.size()));
  }
  ModelAccumulator acc(lowercase);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::span<const float> r = values.subspan(i * dim, dim);
    for (float v : r) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("non-finite vector entry for '" +
                                          words[i] + "'");
      }
    }
    acc.Add(words[i], r);
  }
  if (acc.size() < 2) {
    return absl::FailedPreconditionError("model needs at least two words");
  }

  EmbeddingModel model;
  model.name_ = std::move(name);
  model.lowercase_ = lowercase;
  model.vectors_ = Eigen::Map<const Matrix>(
      acc.values_.data(), static_cast<Eigen::Index>(acc.size()),
      static_cast<Eigen::Index>(dim));
  model.words_ = std::move(acc.words_);
  model.index_ = std::move(acc.index_);
  return model;
}

std::optional<std::size_t> EmbeddingModel::IndexOf(
    std::string_view word) const {
  auto it = lowercase_ ? index_.find(AsciiLower(word)) : index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const float>> EmbeddingModel::VectorOf(
    std::string_view word) const {
  std::optional<std::size_t> i = IndexOf(word);
  if (!i) return std::nullopt;
  return row(*i);
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace diffractor
