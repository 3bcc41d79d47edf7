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

// Index-level noise mechanisms over a vocabulary laid out on a line, and the
// closed-form output distributions used to verify them.
//
// Both mechanisms map an index in [0, V-1] to an index in [0, V-1] and
// satisfy epsilon * |i - i'| metric differential privacy.

#ifndef DIFFRACTOR_MECHANISMS_H_
#define DIFFRACTOR_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "diffractor/rng.h"

namespace diffractor {

enum class MechanismKind {
  // Two-sided geometric noise, clamped to the index range.
  kGeometric,
  // Truncated exponential mechanism restricted to one dimension.
  kTem1D,
};

std::string_view MechanismTag(MechanismKind kind);
std::optional<MechanismKind> ParseMechanism(std::string_view tag);

inline constexpr double kDefaultTemBeta = 0.001;

struct MechanismConfig {
  MechanismKind kind = MechanismKind::kGeometric;
  double epsilon = 1.0;
  // Tail mass parameter, only used by kTem1D.
  double beta = kDefaultTemBeta;
  uint64_t rng_seed = 0;

  absl::Status Validate() const;
};

// Draws x with P[X = x] = ((e^eps - 1) / (e^eps + 1)) * e^(-eps |x|) as the
// difference of two i.i.d. geometric variables with success probability
// 1 - e^-eps. Requires epsilon > 0.
int64_t SampleTwoSidedGeometric(double epsilon, Rng& rng);

// clamp(noisy, 0, V - 1). Requires vocab_size >= 1.
std::size_t TruncateIndex(int64_t noisy, std::size_t vocab_size);

// TruncateIndex(index + x, V) with x from SampleTwoSidedGeometric.
// kOutOfRange when index >= vocab_size.
absl::StatusOr<std::size_t> PerturbIndexGeometric(std::size_t index,
                                                  double epsilon,
                                                  std::size_t vocab_size,
                                                  Rng& rng);

// Exact P[PerturbIndexGeometric(index) = output]. Interior outputs get the
// untruncated mass; the two boundary outputs absorb their geometric tails.
double GeometricPmfAt(std::size_t index, std::size_t output, double epsilon,
                      std::size_t vocab_size);
std::vector<double> GeometricExactPmf(std::size_t index, double epsilon,
                                      std::size_t vocab_size);

// Truncation threshold gamma = (2 / eps) * ln((1 - beta)(V - 1) / beta),
// clamped at zero.
double TemGamma(double epsilon, double beta, std::size_t vocab_size);

// Candidates within gamma of `index` score -|j - index|; when some indices
// lie beyond gamma, a tail bucket scores -gamma + (2 / eps) ln(#tail). Gumbel
// noise of scale 2 / eps is added to every score and the argmax wins. A
// winning tail bucket resolves to a uniform index outside the candidate set.
absl::StatusOr<std::size_t> PerturbIndexTem(std::size_t index, double epsilon,
                                            double beta,
                                            std::size_t vocab_size, Rng& rng);

// Exact output distribution of PerturbIndexTem via the Gumbel-max / softmax
// equivalence.
double TemPmfAt(std::size_t index, std::size_t output, double epsilon,
                double beta, std::size_t vocab_size);
std::vector<double> TemExactPmf(std::size_t index, double epsilon, double beta,
                                std::size_t vocab_size);

// Dispatch on config.kind.
absl::StatusOr<std::size_t> PerturbIndex(const MechanismConfig& config,
                                         std::size_t index,
                                         std::size_t vocab_size, Rng& rng);
double PmfAt(const MechanismConfig& config, std::size_t index,
             std::size_t output, std::size_t vocab_size);
std::vector<double> ExactPmf(const MechanismConfig& config, std::size_t index,
                             std::size_t vocab_size);

}  // namespace diffractor

#endif  // DIFFRACTOR_MECHANISMS_H_
