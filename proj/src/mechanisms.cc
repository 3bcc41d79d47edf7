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

#include "diffractor/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace diffractor {
namespace {

absl::Status CheckIndex(std::size_t index, std::size_t vocab_size) {
  if (vocab_size == 0) {
    return absl::OutOfRangeError("vocabulary size must be positive");
  }
  if (index >= vocab_size) {
    return absl::OutOfRangeError("index " + std::to_string(index) +
                                 " outside [0, " +
                                 std::to_string(vocab_size - 1) + "]");
  }
  return absl::OkStatus();
}

// Number of failures before the first success, success probability
// 1 - e^-eps. floor(Exp(eps)) has exactly this law.
int64_t SampleGeometric(double epsilon, Rng& rng) {
  return static_cast<int64_t>(std::floor(-std::log(UniformOpen01(rng)) /
                                         epsilon));
}

double StandardGumbel(Rng& rng) {
  return -std::log(-std::log(UniformOpen01(rng)));
}

std::size_t AbsDiff(std::size_t a, std::size_t b) {
  return a > b ? a - b : b - a;
}

// Candidate window [lo, hi] and the number of indices outside it.
struct TemWindow {
  double gamma;
  std::size_t lo;
  std::size_t hi;
  std::size_t tail;
};

TemWindow MakeTemWindow(std::size_t index, double epsilon, double beta,
                        std::size_t vocab_size) {
  TemWindow w;
  w.gamma = TemGamma(epsilon, beta, vocab_size);
  const double reach_f = std::floor(w.gamma);
  const std::size_t reach =
      reach_f >= static_cast<double>(vocab_size)
          ? vocab_size
          : static_cast<std::size_t>(reach_f);
  w.lo = index > reach ? index - reach : 0;
  w.hi = std::min(vocab_size - 1, index + reach);
  w.tail = vocab_size - (w.hi - w.lo + 1);
  return w;
}

}  // namespace

std::string_view MechanismTag(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kGeometric:
      return "geometric";
    case MechanismKind::kTem1D:
      return "tem";
  }
  return "geometric";
}

std::optional<MechanismKind> ParseMechanism(std::string_view tag) {
  if (tag == "geometric" || tag == "1-D_G") return MechanismKind::kGeometric;
  if (tag == "tem" || tag == "1-D_T") return MechanismKind::kTem1D;
  return std::nullopt;
}

absl::Status MechanismConfig::Validate() const {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be a positive number");
  }
  if (kind == MechanismKind::kTem1D && !(beta > 0 && beta < 0.5)) {
    return absl::InvalidArgumentError("beta must lie in (0, 0.5)");
  }
  return absl::OkStatus();
}

std::size_t TruncateIndex(int64_t noisy, std::size_t vocab_size) {
  if (noisy < 0) return 0;
  if (noisy > static_cast<int64_t>(vocab_size - 1)) return vocab_size - 1;
  return static_cast<std::size_t>(noisy);
}

int64_t SampleTwoSidedGeometric(double epsilon, Rng& rng) {
  const int64_t a = SampleGeometric(epsilon, rng);
  const int64_t b = SampleGeometric(epsilon, rng);
  return a - b;
}

absl::StatusOr<std::size_t> PerturbIndexGeometric(std::size_t index,
                                                  double epsilon,
                                                  std::size_t vocab_size,
                                                  Rng& rng) {
  if (absl::Status s = CheckIndex(index, vocab_size); !s.ok()) return s;
  return TruncateIndex(
      static_cast<int64_t>(index) + SampleTwoSidedGeometric(epsilon, rng),
      vocab_size);
}

double GeometricPmfAt(std::size_t index, std::size_t output, double epsilon,
                      std::size_t vocab_size) {
  if (vocab_size == 1) return 1.0;
  const double q = std::exp(-epsilon);
  if (output == 0) {
    return std::exp(-epsilon * static_cast<double>(index)) / (1.0 + q);
  }
  if (output == vocab_size - 1) {
    return std::exp(-epsilon * static_cast<double>(vocab_size - 1 - index)) /
           (1.0 + q);
  }
  const double norm = -std::expm1(-epsilon) / (1.0 + q);
  return norm * std::exp(-epsilon * static_cast<double>(AbsDiff(output, index)));
}

std::vector<double> GeometricExactPmf(std::size_t index, double epsilon,
                                      std::size_t vocab_size) {
  std::vector<double> pmf(vocab_size);
  for (std::size_t z = 0; z < vocab_size; ++z) {
    pmf[z] = GeometricPmfAt(index, z, epsilon, vocab_size);
  }
  return pmf;
}

double TemGamma(double epsilon, double beta, std::size_t vocab_size) {
  if (vocab_size <= 1) return 0.0;
  const double gamma =
      (2.0 / epsilon) *
      std::log((1.0 - beta) * static_cast<double>(vocab_size - 1) / beta);
  return std::max(0.0, gamma);
}

absl::StatusOr<std::size_t> PerturbIndexTem(std::size_t index, double epsilon,
                                            double beta,
                                            std::size_t vocab_size, Rng& rng) {
  if (absl::Status s = CheckIndex(index, vocab_size); !s.ok()) return s;
  if (vocab_size == 1) return 0;

  const TemWindow w = MakeTemWindow(index, epsilon, beta, vocab_size);
  const double scale = 2.0 / epsilon;
  std::size_t best = w.lo;
  double best_score = -INFINITY;
  for (std::size_t j = w.lo; j <= w.hi; ++j) {
    const double score =
        -static_cast<double>(AbsDiff(j, index)) + scale * StandardGumbel(rng);
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  if (w.tail > 0) {
    const double tail_score = -w.gamma +
                              scale * std::log(static_cast<double>(w.tail)) +
                              scale * StandardGumbel(rng);
    if (tail_score > best_score) {
      const std::size_t r =
          static_cast<std::size_t>(UniformIndex(rng, w.tail));
      return r < w.lo ? r : r + (w.hi - w.lo + 1);
    }
  }
  return best;
}

double TemPmfAt(std::size_t index, std::size_t output, double epsilon,
                double beta, std::size_t vocab_size) {
  if (vocab_size == 1) return 1.0;
  const TemWindow w = MakeTemWindow(index, epsilon, beta, vocab_size);
  const double half = epsilon / 2.0;
  const double tail_weight = std::exp(-half * w.gamma);
  double total = static_cast<double>(w.tail) * tail_weight;
  for (std::size_t j = w.lo; j <= w.hi; ++j) {
    total += std::exp(-half * static_cast<double>(AbsDiff(j, index)));
  }
  if (output >= w.lo && output <= w.hi) {
    return std::exp(-half * static_cast<double>(AbsDiff(output, index))) /
           total;
  }
  return tail_weight / total;
}

std::vector<double> TemExactPmf(std::size_t index, double epsilon, double beta,
                                std::size_t vocab_size) {
  std::vector<double> pmf(vocab_size);
  if (vocab_size == 1) {
    pmf[0] = 1.0;
    return pmf;
  }
  const TemWindow w = MakeTemWindow(index, epsilon, beta, vocab_size);
  const double half = epsilon / 2.0;
  const double tail_weight = std::exp(-half * w.gamma);
  double total = 0.0;
  for (std::size_t z = 0; z < vocab_size; ++z) {
    pmf[z] = (z >= w.lo && z <= w.hi)
                 ? std::exp(-half * static_cast<double>(AbsDiff(z, index)))
                 : tail_weight;
    total += pmf[z];
  }
  for (double& p : pmf) p /= total;
  return pmf;
}

absl::StatusOr<std::size_t> PerturbIndex(const MechanismConfig& config,
                                         std::size_t index,
                                         std::size_t vocab_size, Rng& rng) {
  switch (config.kind) {
    case MechanismKind::kGeometric:
      return PerturbIndexGeometric(index, config.epsilon, vocab_size, rng);
    case MechanismKind::kTem1D:
      return PerturbIndexTem(index, config.epsilon, config.beta, vocab_size,
                             rng);
  }
  return absl::InternalError("unknown mechanism");
}

double PmfAt(const MechanismConfig& config, std::size_t index,
             std::size_t output, std::size_t vocab_size) {
  return config.kind == MechanismKind::kGeometric
             ? GeometricPmfAt(index, output, config.epsilon, vocab_size)
             : TemPmfAt(index, output, config.epsilon, config.beta,
                        vocab_size);
}

std::vector<double> ExactPmf(const MechanismConfig& config, std::size_t index,
                             std::size_t vocab_size) {
  return config.kind == MechanismKind::kGeometric
             ? GeometricExactPmf(index, config.epsilon, vocab_size)
             : TemExactPmf(index, config.epsilon, config.beta, vocab_size);
}

}  // namespace diffractor
