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

// Sensitivity bounds for the weighted first moment and the three noise
// mechanisms used to privatize the moment pair. Each mechanism releases one
// statistic at eps'-DP (the Gaussian one at (eps', delta_f)-DP).

#ifndef DP_IRLS_MECHANISMS_HPP_
#define DP_IRLS_MECHANISMS_HPP_

#include <cmath>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dp_irls/rng.hpp"
#include "dp_irls/types.hpp"

namespace dp_irls {

// Tolerance on |B - B^T| accepted by WishartPerturb.
inline constexpr double kSymmetryTolerance = 1e-10;

// Replacing one datapoint moves A by at most 2 * cap * sqrt(d) / N in L1.
inline double L1SensitivityA(int dim, int num_points, double weight_cap) {
  return 2.0 * weight_cap * std::sqrt(static_cast<double>(dim)) / num_points;
}

inline double L2SensitivityA(int num_points, double weight_cap) {
  return 2.0 * weight_cap / num_points;
}

namespace internal {

inline absl::Status CheckReleaseArgs(double epsilon, int num_points,
                                     double weight_cap) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("per-release epsilon must be positive, got %g",
                        epsilon));
  }
  if (num_points < 1) {
    return absl::InvalidArgumentError("N must be >= 1");
  }
  if (!(weight_cap > 0.0)) {
    return absl::InvalidArgumentError("weight cap must be positive");
  }
  return absl::OkStatus();
}

}  // namespace internal

struct LaplaceNoiseSpec {
  double scale = 0.0;

  static absl::StatusOr<LaplaceNoiseSpec> Create(int dim, int num_points,
                                                 double weight_cap,
                                                 double epsilon) {
    if (absl::Status s =
            internal::CheckReleaseArgs(epsilon, num_points, weight_cap);
        !s.ok()) {
      return s;
    }
    return LaplaceNoiseSpec{L1SensitivityA(dim, num_points, weight_cap) /
                            epsilon};
  }
};

struct GaussianNoiseSpec {
  double stddev = 0.0;
  double sensitivity = 0.0;
  // Smallest admissible multiplier, sqrt(2 log(1.25 / delta_f)).
  double multiplier = 0.0;
  double failure_prob = 0.0;
  // The classical Gaussian-mechanism guarantee assumes eps' < 1. Larger
  // values are allowed but flagged here.
  bool epsilon_outside_classical_range = false;

  static absl::StatusOr<GaussianNoiseSpec> Create(int num_points,
                                                  double weight_cap,
                                                  double epsilon,
                                                  double failure_prob) {
    if (absl::Status s =
            internal::CheckReleaseArgs(epsilon, num_points, weight_cap);
        !s.ok()) {
      return s;
    }
    if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Gaussian failure probability must lie in (0, 1), got %g",
          failure_prob));
    }
    GaussianNoiseSpec spec;
    spec.sensitivity = L2SensitivityA(num_points, weight_cap);
    spec.multiplier = std::sqrt(2.0 * std::log(1.25 / failure_prob));
    spec.stddev = spec.multiplier * spec.sensitivity / epsilon;
    spec.failure_prob = failure_prob;
    spec.epsilon_outside_classical_range = epsilon >= 1.0;
    return spec;
  }
};

struct WishartNoiseSpec {
  // Covariance of each Gaussian column is variance * I_d.
  double variance = 0.0;
  int degrees_of_freedom = 0;

  static absl::StatusOr<WishartNoiseSpec> Create(int dim, int num_points,
                                                 double weight_cap,
                                                 double epsilon) {
    if (absl::Status s =
            internal::CheckReleaseArgs(epsilon, num_points, weight_cap);
        !s.ok()) {
      return s;
    }
    return WishartNoiseSpec{weight_cap / (2.0 * epsilon * num_points),
                            dim + 1};
  }
};

inline absl::StatusOr<Vector> LaplacePerturb(const Vector& first_moment,
                                             double epsilon, double weight_cap,
                                             int num_points, SeededRng& rng) {
  absl::StatusOr<LaplaceNoiseSpec> spec =
      LaplaceNoiseSpec::Create(static_cast<int>(first_moment.size()),
                               num_points, weight_cap, epsilon);
  if (!spec.ok()) return spec.status();
  Vector out = first_moment;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += rng.Laplace(spec->scale);
  return out;
}

inline absl::StatusOr<Vector> GaussianPerturb(const Vector& first_moment,
                                              double epsilon,
                                              double failure_prob,
                                              double weight_cap,
                                              int num_points, SeededRng& rng) {
  absl::StatusOr<GaussianNoiseSpec> spec = GaussianNoiseSpec::Create(
      num_points, weight_cap, epsilon, failure_prob);
  if (!spec.ok()) return spec.status();
  Vector out = first_moment;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] += spec->stddev * rng.StandardNormal();
  }
  return out;
}

// Returns B + Z Z^T where Z is d x (d+1) with i.i.d. N(0, variance) entries.
// The output is assembled from the upper triangle so it is exactly
// symmetric.
inline absl::StatusOr<Matrix> WishartPerturb(const Matrix& second_moment,
                                             double epsilon, double weight_cap,
                                             int num_points, SeededRng& rng) {
  if (second_moment.rows() != second_moment.cols()) {
    return absl::InvalidArgumentError("second moment must be square");
  }
  const int dim = static_cast<int>(second_moment.rows());
  const double asymmetry =
      (second_moment - second_moment.transpose()).cwiseAbs().maxCoeff();
  if (!(asymmetry <= kSymmetryTolerance)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "second moment is not symmetric (max |B - B^T| = %g)", asymmetry));
  }
  absl::StatusOr<WishartNoiseSpec> spec =
      WishartNoiseSpec::Create(dim, num_points, weight_cap, epsilon);
  if (!spec.ok()) return spec.status();

  const double column_stddev = std::sqrt(spec->variance);
  Matrix columns(dim, spec->degrees_of_freedom);
  for (int k = 0; k < spec->degrees_of_freedom; ++k) {
    for (int i = 0; i < dim; ++i) {
      columns(i, k) = column_stddev * rng.StandardNormal();
    }
  }
  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double gram = columns.row(i).dot(columns.row(j));
      out(i, j) = second_moment(i, j) + gram;
      out(j, i) = out(i, j);
    }
  }
  return out;
}

}  // namespace dp_irls

#endif  // DP_IRLS_MECHANISMS_HPP_
