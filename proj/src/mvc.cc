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

#include "diffractor/mvc.h"

#include <cmath>
#include <limits>
#include <random>

namespace diffractor {

absl::StatusOr<MvcMechanism> MvcMechanism::Create(const EmbeddingModel& model,
                                                  double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be a positive number");
  }
  return MvcMechanism(model, epsilon);
}

std::vector<double> MvcMechanism::SampleNoise(Rng& rng) const {
  const std::size_t dim = model_->dim();
  std::vector<double> z(dim);
  std::normal_distribution<double> normal;
  double norm2 = 0;
  do {
    norm2 = 0;
    for (double& v : z) {
      v = normal(rng);
      norm2 += v * v;
    }
  } while (norm2 == 0);
  std::gamma_distribution<double> radius(static_cast<double>(dim),
                                         1.0 / epsilon_);
  const double scale = radius(rng) / std::sqrt(norm2);
  for (double& v : z) v *= scale;
  return z;
}

std::size_t MvcMechanism::NearestWord(const std::vector<float>& point) const {
  const EmbeddingModel::Matrix& x = model_->vectors();
  Eigen::Map<const Eigen::RowVectorXf> p(point.data(),
                                         static_cast<Eigen::Index>(point.size()));
  float best = std::numeric_limits<float>::infinity();
  std::size_t best_index = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const float d = (x.row(i) - p).squaredNorm();
    if (d < best) {
      best = d;
      best_index = static_cast<std::size_t>(i);
    }
  }
  return best_index;
}

absl::StatusOr<std::string> MvcMechanism::Perturb(std::string_view word,
                                                  Rng& rng) const {
  std::optional<std::span<const float>> v = model_->VectorOf(word);
  if (!v) {
    return absl::FailedPreconditionError("word not in model: '" +
                                         std::string(word) + "'");
  }
  const std::vector<double> z = SampleNoise(rng);
  std::vector<float> noisy(v->size());
  for (std::size_t j = 0; j < noisy.size(); ++j) {
    noisy[j] = static_cast<float>((*v)[j] + z[j]);
  }
  return model_->word(NearestWord(noisy));
}

}  // namespace diffractor
