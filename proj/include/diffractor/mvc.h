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

// High-dimensional comparator: add multivariate noise with density
// proportional to exp(-epsilon * ||z||) to the word vector, then map back to
// the nearest vocabulary word by exhaustive scan. Exists to compare speed and
// memory, not as a recommended mechanism.

#ifndef DIFFRACTOR_MVC_H_
#define DIFFRACTOR_MVC_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "diffractor/embedding_model.h"
#include "diffractor/rng.h"

namespace diffractor {

class MvcMechanism {
 public:
  // kInvalidArgument unless epsilon > 0. The model must outlive the mechanism.
  static absl::StatusOr<MvcMechanism> Create(const EmbeddingModel& model,
                                             double epsilon);

  const EmbeddingModel& model() const { return *model_; }
  double epsilon() const { return epsilon_; }

  // kFailedPrecondition when `word` is out of vocabulary.
  absl::StatusOr<std::string> Perturb(std::string_view word, Rng& rng) const;

  // Noise vector: uniform direction times a Gamma(dim, 1 / epsilon) norm.
  std::vector<double> SampleNoise(Rng& rng) const;

  // Index of the vocabulary vector closest to `point`. Ties go to the lower
  // index.
  std::size_t NearestWord(const std::vector<float>& point) const;

 private:
  MvcMechanism(const EmbeddingModel& model, double epsilon)
      : model_(&model), epsilon_(epsilon) {}

  const EmbeddingModel* model_;
  double epsilon_;
};

}  // namespace diffractor

#endif  // DIFFRACTOR_MVC_H_
