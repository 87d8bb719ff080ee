// Copyright 2026 The dp_irls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic linear-regression data: standard normal covariates and
// parameters, Gaussian observation noise, unit-norm normalization and a
// train/test split.

#ifndef DP_IRLS_DATAGEN_HPP_
#define DP_IRLS_DATAGEN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dp_irls/internal/status_macros.hpp"
#include "dp_irls/rng.hpp"
#include "dp_irls/types.hpp"

namespace dp_irls {

enum class TestSplit {
  // Draw N points and hold out round(0.1 N) of them; train on the rest.
  kHoldout,
  // Draw N training points plus round(0.1 N) extra test points.
  kExtra,
};

inline constexpr double kTestFraction = 0.10;

struct SyntheticSpec {
  int num_points = 1000;
  int dim = 10;
  double noise_var = 0.01;
  uint64_t seed = 0;
  TestSplit split = TestSplit::kHoldout;

  absl::Status Validate() const {
    if (num_points < 2) {
      return absl::InvalidArgumentError("synthetic N must be >= 2");
    }
    if (dim < 1) return absl::InvalidArgumentError("synthetic d must be >= 1");
    if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
      return absl::InvalidArgumentError("noise variance must be positive");
    }
    return absl::OkStatus();
  }
};

struct SplitDataset {
  Dataset train;
  Dataset test;
  // Generating parameter in raw (pre-normalization) units.
  ParameterVector true_theta;
  NormalizationScales scales;

  // The generating parameter expressed for the normalized data:
  // y/ry = (x/rx)^T (theta rx / ry).
  ParameterVector NormalizedTrueTheta() const {
    return true_theta * (scales.feature_scale / scales.response_scale);
  }
};

inline int TestSize(int num_points) {
  return static_cast<int>(std::lround(kTestFraction * num_points));
}

inline absl::StatusOr<SplitDataset> GenerateSynthetic(
    const SyntheticSpec& spec) {
  DP_IRLS_RETURN_IF_ERROR(spec.Validate());
  const int num_test = std::max(1, TestSize(spec.num_points));
  const int num_train = spec.split == TestSplit::kExtra
                            ? spec.num_points
                            : spec.num_points - num_test;
  const int total = num_train + num_test;

  SeededRng rng(spec.seed, /*stream_id=*/0);
  const int dim = spec.dim;
  RowMatrix x(total, dim);
  for (int i = 0; i < total; ++i) {
    for (int j = 0; j < dim; ++j) x(i, j) = rng.StandardNormal();
  }
  ParameterVector theta(dim);
  for (int j = 0; j < dim; ++j) theta[j] = rng.StandardNormal();
  const double noise_sd = std::sqrt(spec.noise_var);
  Vector y = x * theta;
  for (int i = 0; i < total; ++i) y[i] += noise_sd * rng.StandardNormal();

  DP_IRLS_ASSIGN_OR_RETURN(NormalizedDataset normalized,
                           NormalizeDatasetWithScales(std::move(x), std::move(y)));
  const RowMatrix& nx = normalized.dataset.features();
  const Vector& ny = normalized.dataset.responses();
  DP_IRLS_ASSIGN_OR_RETURN(
      Dataset train,
      Dataset::Create(nx.topRows(num_train), ny.head(num_train)));
  DP_IRLS_ASSIGN_OR_RETURN(
      Dataset test, Dataset::Create(nx.bottomRows(num_test), ny.tail(num_test)));
  return SplitDataset{std::move(train), std::move(test), std::move(theta),
                      normalized.scales};
}

}  // namespace dp_irls

#endif  // DP_IRLS_DATAGEN_HPP_
