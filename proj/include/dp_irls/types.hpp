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

// Value types shared by the solvers: datasets with norm-bound invariants,
// weighted moment pairs, and solver configuration.

#ifndef DP_IRLS_TYPES_HPP_
#define DP_IRLS_TYPES_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace dp_irls {

// Datapoints are stored one per row.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ParameterVector = Eigen::VectorXd;

// Slack allowed on the unit-norm bounds to absorb rounding in the
// normalization division.
inline constexpr double kNormTolerance = 1e-12;

// An immutable regression dataset with every ||x_i||_2 <= 1 and |y_i| <= 1.
class Dataset {
 public:
  // Validates the invariants and takes ownership of the data.
  static absl::StatusOr<Dataset> Create(RowMatrix features, Vector responses) {
    if (features.rows() != responses.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "dimension mismatch: X has %d rows but y has %d entries",
          features.rows(), responses.size()));
    }
    if (features.rows() < 1) {
      return absl::InvalidArgumentError("dataset must contain N >= 1 rows");
    }
    if (features.cols() < 1) {
      return absl::InvalidArgumentError("dataset must have dimension d >= 1");
    }
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
      const double norm = features.row(i).norm();
      if (!std::isfinite(norm) || norm > 1.0 + kNormTolerance) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "row %d violates ||x_i||_2 <= 1 (norm %.17g)", i, norm));
      }
      const double y = responses[i];
      if (!std::isfinite(y) || std::abs(y) > 1.0 + kNormTolerance) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "row %d violates |y_i| <= 1 (y %.17g)", i, y));
      }
    }
    return Dataset(std::move(features), std::move(responses));
  }

  const RowMatrix& features() const { return features_; }
  const Vector& responses() const { return responses_; }
  int size() const { return static_cast<int>(features_.rows()); }
  int dim() const { return static_cast<int>(features_.cols()); }

 private:
  Dataset(RowMatrix features, Vector responses)
      : features_(std::move(features)), responses_(std::move(responses)) {}

  RowMatrix features_;
  Vector responses_;
};

inline absl::StatusOr<Dataset> ValidateDataset(RowMatrix features,
                                               Vector responses) {
  return Dataset::Create(std::move(features), std::move(responses));
}

// Per-axis scale factors applied by NormalizeDataset; the normalized data is
// (X / feature_scale, y / response_scale).
struct NormalizationScales {
  double feature_scale = 1.0;
  double response_scale = 1.0;
};

struct NormalizedDataset {
  Dataset dataset;
  NormalizationScales scales;
};

namespace internal {

// A scale within kNormTolerance of one is treated as one, which makes the
// normalization bitwise idempotent.
inline double EffectiveScale(double max_magnitude) {
  if (max_magnitude == 0.0 ||
      std::abs(max_magnitude - 1.0) <= kNormTolerance) {
    return 1.0;
  }
  return max_magnitude;
}

}  // namespace internal

// Rescales X by its largest row L2 norm and y by its largest magnitude.
// All-zero X (or y) passes through unchanged.
inline absl::StatusOr<NormalizedDataset> NormalizeDatasetWithScales(
    RowMatrix features, Vector responses) {
  if (features.rows() != responses.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: X has %d rows but y has %d entries",
        features.rows(), responses.size()));
  }
  NormalizationScales scales;
  if (features.rows() > 0) {
    scales.feature_scale =
        internal::EffectiveScale(features.rowwise().norm().maxCoeff());
    scales.response_scale =
        internal::EffectiveScale(responses.cwiseAbs().maxCoeff());
  }
  if (scales.feature_scale != 1.0) features /= scales.feature_scale;
  if (scales.response_scale != 1.0) responses /= scales.response_scale;
  absl::StatusOr<Dataset> dataset =
      Dataset::Create(std::move(features), std::move(responses));
  if (!dataset.ok()) return dataset.status();
  return NormalizedDataset{*std::move(dataset), scales};
}

inline absl::StatusOr<Dataset> NormalizeDataset(RowMatrix features,
                                                Vector responses) {
  absl::StatusOr<NormalizedDataset> normalized =
      NormalizeDatasetWithScales(std::move(features), std::move(responses));
  if (!normalized.ok()) return normalized.status();
  return std::move(normalized->dataset);
}

// First and second weighted moments: A = X^T S y / N and B = X^T S X / N.
struct MomentPair {
  Vector first;
  Matrix second;
};

// s_i = 1 / max(1/cap, |residual_i|), so 0 < s_i <= cap.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(Vector values) : values_(std::move(values)) {}

  const Vector& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  bool empty() const { return values_.size() == 0; }
  double operator[](int i) const { return values_[i]; }

 private:
  Vector values_;
};

struct IrlsConfig {
  // Only the L1 objective is supported.
  static constexpr int kNormExponent = 1;

  int iterations = 10;
  double weight_cap = 100.0;
  // Zero vector when unset.
  std::optional<ParameterVector> theta_init;
  // Exact solver only: stop once successive iterates differ by at most this
  // much in L2 norm. The private solver always runs every iteration.
  std::optional<double> exact_tolerance;

  absl::Status Validate(int dim) const {
    if (iterations < 1) {
      return absl::InvalidArgumentError("iterations must be >= 1");
    }
    if (!(weight_cap > 0.0) || !std::isfinite(weight_cap)) {
      return absl::InvalidArgumentError("weight_cap must be positive");
    }
    if (theta_init.has_value()) {
      if (theta_init->size() != dim) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "theta_init has length %d, expected %d", theta_init->size(), dim));
      }
      if (!theta_init->allFinite()) {
        return absl::InvalidArgumentError("theta_init must be finite");
      }
    }
    if (exact_tolerance.has_value() && !(*exact_tolerance >= 0.0)) {
      return absl::InvalidArgumentError("exact_tolerance must be >= 0");
    }
    return absl::OkStatus();
  }

  ParameterVector InitialTheta(int dim) const {
    return theta_init.value_or(ParameterVector::Zero(dim));
  }
};

}  // namespace dp_irls

#endif  // DP_IRLS_TYPES_HPP_
