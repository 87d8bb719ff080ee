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

#ifndef DP_IRLS_EVALUATION_HPP_
#define DP_IRLS_EVALUATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dp_irls/types.hpp"

namespace dp_irls {

inline constexpr double kVarianceFloor = 1e-8;

// Mean Gaussian log-density of the test responses under y ~ N(x^T theta,
// variance).
inline absl::StatusOr<double> LoglikPerTestPoint(const Dataset& test,
                                                 const ParameterVector& theta,
                                                 double variance) {
  if (test.size() < 1) {
    return absl::InvalidArgumentError("test set is empty");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("variance must be positive, got %g", variance));
  }
  if (theta.size() != test.dim()) {
    return absl::InvalidArgumentError("theta dimension does not match data");
  }
  const Vector residuals = test.responses() - test.features() * theta;
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * variance);
  double total = 0.0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    total += log_norm - residuals[i] * residuals[i] / (2.0 * variance);
  }
  return total / test.size();
}

// Training-residual MLE, floored at kVarianceFloor.
inline double EstimateResidualVariance(const Dataset& train,
                                       const ParameterVector& theta) {
  const Vector residuals = train.responses() - train.features() * theta;
  return std::max(residuals.squaredNorm() / train.size(), kVarianceFloor);
}

struct EvalResult {
  double loglik_per_point = 0.0;
  double residual_var_estimate = 0.0;
  std::string mechanism;
  int num_points = 0;
  uint64_t seed = 0;
};

// Scores theta on `test` with the variance estimated from `train`.
inline absl::StatusOr<EvalResult> Evaluate(const Dataset& train,
                                           const Dataset& test,
                                           const ParameterVector& theta) {
  EvalResult result;
  result.residual_var_estimate = EstimateResidualVariance(train, theta);
  absl::StatusOr<double> loglik =
      LoglikPerTestPoint(test, theta, result.residual_var_estimate);
  if (!loglik.ok()) return loglik.status();
  if (!std::isfinite(*loglik)) {
    return absl::OutOfRangeError("test log-likelihood is not finite");
  }
  result.loglik_per_point = *loglik;
  return result;
}

}  // namespace dp_irls

#endif  // DP_IRLS_EVALUATION_HPP_
