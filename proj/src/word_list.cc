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

#include "diffractor/word_list.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <utility>

#include "diffractor/rng.h"
#include "json.hpp"

namespace diffractor {
namespace {

constexpr std::string_view kChecksumPrefix = "#checksum ";

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

uint64_t Fnv1a(std::string_view bytes, uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string Hex16(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool ParseHex16(std::string_view s, uint64_t* out) {
  if (s.size() != 16) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out, 16);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Squared Euclidean distance accumulated in double. Four partial sums keep
// the dependency chain short; the result is exact up to double rounding.
double SquaredDistance(const float* a, const float* b, std::size_t dim) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t j = 0;
  for (; j + 4 <= dim; j += 4) {
    const double d0 = double(a[j]) - double(b[j]);
    const double d1 = double(a[j + 1]) - double(b[j + 1]);
    const double d2 = double(a[j + 2]) - double(b[j + 2]);
    const double d3 = double(a[j + 3]) - double(b[j + 3]);
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; j < dim; ++j) {
    const double d = double(a[j]) - double(b[j]);
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

// The words not yet appended, stored contiguously so a scan streams through
// memory. Removal swaps the last row into the hole.
class RemainingSet {
 public:
  RemainingSet(const EmbeddingModel& model, std::size_t exclude)
      : dim_(model.dim()), position_(model.size(), kAbsent) {
    ids_.reserve(model.size() - 1);
    rows_.reserve((model.size() - 1) * dim_);
    for (std::size_t i = 0; i < model.size(); ++i) {
      if (i == exclude) continue;
      position_[i] = ids_.size();
      ids_.push_back(static_cast<uint32_t>(i));
      std::span<const float> r = model.row(i);
      rows_.insert(rows_.end(), r.begin(), r.end());
    }
  }

  bool empty() const { return ids_.empty(); }
  bool Contains(std::size_t id) const { return position_[id] != kAbsent; }

  // Nearest remaining word to `query`; ties go to the smallest id.
  std::size_t Nearest(const float* query) const {
    double best = std::numeric_limits<double>::infinity();
    uint32_t best_id = std::numeric_limits<uint32_t>::max();
    const float* row = rows_.data();
    for (std::size_t p = 0; p < ids_.size(); ++p, row += dim_) {
      const double d = SquaredDistance(query, row, dim_);
      if (d < best || (d == best && ids_[p] < best_id)) {
        best = d;
        best_id = ids_[p];
      }
    }
    return best_id;
  }

  void Remove(std::size_t id) {
    const std::size_t p = position_[id];
    const std::size_t last = ids_.size() - 1;
    if (p != last) {
      ids_[p] = ids_[last];
      position_[ids_[p]] = p;
      std::copy_n(rows_.begin() + last * dim_, dim_, rows_.begin() + p * dim_);
    }
    ids_.pop_back();
    rows_.resize(last * dim_);
    position_[id] = kAbsent;
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  std::size_t dim_;
  std::vector<uint32_t> ids_;
  std::vector<float> rows_;
  std::vector<std::size_t> position_;
};

std::vector<std::size_t> ExactChain(const EmbeddingModel& model,
                                    std::size_t seed) {
  std::vector<std::size_t> order;
  order.reserve(model.size());
  order.push_back(seed);
  RemainingSet remaining(model, seed);
  std::size_t current = seed;
  while (!remaining.empty()) {
    const std::size_t next = remaining.Nearest(model.row(current).data());
    remaining.Remove(next);
    order.push_back(next);
    current = next;
  }
  return order;
}

// For every word, its k nearest other words sorted by (distance, id). The
// shortlist uses float GEMM; survivors are re-ranked with exact distances.
std::vector<std::vector<uint32_t>> CandidateLists(const EmbeddingModel& model,
                                                  std::size_t k) {
  using RowMatrix = EmbeddingModel::Matrix;
  const auto& x = model.vectors();
  const Eigen::Index n = x.rows();
  const std::size_t dim = model.dim();
  k = std::min<std::size_t>(k, static_cast<std::size_t>(n) - 1);

  const Eigen::VectorXf norms = x.rowwise().squaredNorm();
  std::vector<std::vector<uint32_t>> lists(static_cast<std::size_t>(n));

  constexpr Eigen::Index kBlock = 256;
  RowMatrix gram;
  std::vector<std::pair<float, uint32_t>> heap;
  std::vector<std::pair<double, uint32_t>> ranked;
  for (Eigen::Index q0 = 0; q0 < n; q0 += kBlock) {
    const Eigen::Index rows = std::min(kBlock, n - q0);
    gram.noalias() = x.middleRows(q0, rows) * x.transpose();
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index q = q0 + r;
      const float* g = gram.data() + r * n;
      heap.clear();
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == q) continue;
        const float d = norms[q] + norms[c] - 2.0f * g[c];
        if (heap.size() < k) {
          heap.emplace_back(d, static_cast<uint32_t>(c));
          std::push_heap(heap.begin(), heap.end());
        } else if (d < heap.front().first) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = {d, static_cast<uint32_t>(c)};
          std::push_heap(heap.begin(), heap.end());
        }
      }
      ranked.clear();
      for (const auto& [approx, c] : heap) {
        ranked.emplace_back(
            SquaredDistance(model.row(q).data(), model.row(c).data(), dim), c);
      }
      std::sort(ranked.begin(), ranked.end());
      auto& out = lists[static_cast<std::size_t>(q)];
      out.reserve(ranked.size());
      for (const auto& [d, c] : ranked) out.push_back(c);
    }
  }
  return lists;
}

std::vector<std::size_t> ApproximateChain(const EmbeddingModel& model,
                                          std::size_t seed,
                                          std::size_t candidates) {
  const std::vector<std::vector<uint32_t>> lists =
      CandidateLists(model, std::max<std::size_t>(candidates, 1));
  std::vector<std::size_t> order;
  order.reserve(model.size());
  order.push_back(seed);
  RemainingSet remaining(model, seed);
  std::size_t current = seed;
  while (!remaining.empty()) {
    std::size_t next = std::numeric_limits<std::size_t>::max();
    for (uint32_t c : lists[current]) {
      if (remaining.Contains(c)) {
        next = c;
        break;
      }
    }
    if (next == std::numeric_limits<std::size_t>::max()) {
      next = remaining.Nearest(model.row(current).data());
    }
    remaining.Remove(next);
    order.push_back(next);
    current = next;
  }
  return order;
}

}  // namespace

std::string_view BackendTag(NeighborBackend backend) {
  switch (backend) {
    case NeighborBackend::kExact:
      return "exact";
    case NeighborBackend::kApproximate:
      return "approximate";
  }
  return "exact";
}

std::optional<NeighborBackend> ParseBackend(std::string_view tag) {
  if (tag == "exact") return NeighborBackend::kExact;
  if (tag == "approx" || tag == "approximate") {
    return NeighborBackend::kApproximate;
  }
  return std::nullopt;
}

uint64_t WordSequenceChecksum(const std::vector<std::string>& words) {
  uint64_t h = kFnvOffset;
  for (const std::string& w : words) {
    h = Fnv1a(w, h);
    h = Fnv1a("\n", h);
  }
  return h;
}

absl::StatusOr<WordList> WordList::FromWords(std::vector<std::string> words,
                                             WordListMeta meta) {
  if (words.empty()) return absl::InvalidArgumentError("word list is empty");
  WordList list;
  list.index_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].empty()) {
      return absl::InvalidArgumentError("empty token at index " +
                                        std::to_string(i));
    }
    if (!list.index_.emplace(words[i], i).second) {
      return absl::InvalidArgumentError("duplicate token '" + words[i] +
                                        "' at index " + std::to_string(i));
    }
  }
  if (meta.checksum == 0) meta.checksum = WordSequenceChecksum(words);
  list.words_ = std::move(words);
  list.meta_ = std::move(meta);
  return list;
}

absl::StatusOr<WordList> BuildWordList(const EmbeddingModel& model,
                                       uint64_t rng_seed,
                                       const BuildOptions& options) {
  if (model.size() < 2) {
    return absl::FailedPreconditionError(
        "cannot build a list from fewer than two words");
  }
  Rng rng = MakeStream(rng_seed, 0);
  const std::size_t seed_index =
      static_cast<std::size_t>(UniformIndex(rng, model.size()));
  return BuildWordListFrom(model, seed_index, rng_seed, options);
}

absl::StatusOr<WordList> BuildWordListFrom(const EmbeddingModel& model,
                                           std::size_t seed_index,
                                           uint64_t rng_seed,
                                           const BuildOptions& options) {
  if (model.size() < 2) {
    return absl::FailedPreconditionError(
        "cannot build a list from fewer than two words");
  }
  if (seed_index >= model.size()) {
    return absl::OutOfRangeError("seed index out of range");
  }
  const std::vector<std::size_t> order =
      options.backend == NeighborBackend::kExact
          ? ExactChain(model, seed_index)
          : ApproximateChain(model, seed_index, options.candidates);

  std::vector<std::string> words;
  words.reserve(order.size());
  for (std::size_t i : order) words.push_back(model.word(i));

  WordListMeta meta;
  meta.model_name = model.name();
  meta.seed_word = model.word(seed_index);
  meta.master_seed = rng_seed;
  meta.backend = std::string(BackendTag(options.backend));
  return WordList::FromWords(std::move(words), std::move(meta));
}

absl::Status SaveWordList(const WordList& list, const std::string& path) {
  const WordListMeta& m = list.meta();
  nlohmann::json header = {
      {"model", m.model_name},   {"seed_word", m.seed_word},
      {"seed", m.master_seed},   {"metric", m.metric},
      {"backend", m.backend},    {"checksum", Hex16(m.checksum)},
      {"size", list.size()},
  };
  std::string body = header.dump();
  body.push_back('\n');
  for (const std::string& w : list.words()) {
    body += w;
    body.push_back('\n');
  }
  const uint64_t content_checksum = Fnv1a(body);
  body += kChecksumPrefix;
  body += Hex16(content_checksum);
  body.push_back('\n');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError("cannot open for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.close();
  if (!out) return absl::UnavailableError("write failed: " + path);
  return absl::OkStatus();
}

absl::StatusOr<WordList> LoadWordList(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot open list file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) return absl::UnavailableError("read failed: " + path);

  // The checksum record must be the final, newline-terminated line.
  if (data.empty() || data.back() != '\n') {
    return absl::DataLossError("corrupt list file (truncated): " + path);
  }
  const std::size_t record_start = data.rfind('\n', data.size() - 2);
  const std::size_t tail_begin =
      record_start == std::string::npos ? 0 : record_start + 1;
  std::string_view record(data.data() + tail_begin,
                          data.size() - 1 - tail_begin);
  uint64_t stored = 0;
  if (!record.starts_with(kChecksumPrefix) ||
      !ParseHex16(record.substr(kChecksumPrefix.size()), &stored)) {
    return absl::DataLossError(
        "corrupt list file (missing checksum record): " + path);
  }
  std::string_view content(data.data(), tail_begin);

  const std::size_t header_end = content.find('\n');
  if (header_end == std::string_view::npos) {
    return absl::DataLossError("corrupt list file (no header): " + path);
  }
  WordListMeta meta;
  std::size_t declared_size = 0;
  try {
    nlohmann::json header =
        nlohmann::json::parse(content.substr(0, header_end));
    meta.model_name = header.at("model").get<std::string>();
    meta.seed_word = header.at("seed_word").get<std::string>();
    meta.master_seed = header.at("seed").get<uint64_t>();
    meta.metric = header.at("metric").get<std::string>();
    meta.backend = header.at("backend").get<std::string>();
    declared_size = header.at("size").get<std::size_t>();
    if (!ParseHex16(header.at("checksum").get<std::string>(),
                    &meta.checksum)) {
      return absl::InvalidArgumentError("bad checksum field in header: " +
                                        path);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError("format error in list header of " +
                                      path + ": " + e.what());
  }

  std::vector<std::string> words;
  words.reserve(declared_size);
  std::size_t pos = header_end + 1;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    words.emplace_back(content.substr(pos, eol - pos));
    pos = eol + 1;
  }
  const uint64_t expected_checksum = meta.checksum;
  absl::StatusOr<WordList> list =
      WordList::FromWords(std::move(words), std::move(meta));
  if (!list.ok()) {
    return absl::InvalidArgumentError("format error in " + path + ": " +
                                      std::string(list.status().message()));
  }

  if (Fnv1a(content) != stored) {
    return absl::DataLossError("corrupt list file (checksum mismatch): " +
                               path);
  }
  if (list->size() != declared_size ||
      WordSequenceChecksum(list->words()) != expected_checksum) {
    return absl::DataLossError(
        "corrupt list file (content does not match header): " + path);
  }
  return list;
}

absl::StatusOr<std::size_t> IndexDistance(const WordList& list,
                                          std::string_view a,
                                          std::string_view b) {
  std::optional<std::size_t> ia = list.IndexOf(a);
  std::optional<std::size_t> ib = list.IndexOf(b);
  if (!ia || !ib) {
    return absl::FailedPreconditionError(
        "word not in list: '" + std::string(!ia ? a : b) + "'");
  }
  return *ia > *ib ? *ia - *ib : *ib - *ia;
}

}  // namespace diffractor
