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

// Iteratively reweighted least squares for L1 linear regression, with an
// exact solver and a private solver that perturbs the weighted moments
// before every solve.

#ifndef DP_IRLS_IRLS_HPP_
#define DP_IRLS_IRLS_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dp_irls/accountant.hpp"
#include "dp_irls/internal/status_macros.hpp"
#include "dp_irls/mechanisms.hpp"
#include "dp_irls/rng.hpp"
#include "dp_irls/types.hpp"
#include "json.hpp"

namespace dp_irls {

// Noise applied to the first moment. Any choice other than kNone also
// applies Wishart noise to the second moment.
enum class MomentMechanism { kNone, kLaplace, kGaussian };

inline std::string_view MechanismName(MomentMechanism mechanism) {
  switch (mechanism) {
    case MomentMechanism::kNone:
      return "none";
    case MomentMechanism::kLaplace:
      return "laplace";
    case MomentMechanism::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

enum class ReleasedStatistic { kFirstMoment, kSecondMoment };

struct ReleaseRecord {
  int iteration = 0;
  ReleasedStatistic statistic = ReleasedStatistic::kFirstMoment;
  // "laplace", "gaussian" or "wishart".
  std::string_view mechanism;
  double epsilon = 0.0;
};

struct IrlsState {
  // 1-based; state t holds the iterate produced by iteration t.
  int iteration = 0;
  ParameterVector theta;
  // Empty for private runs, where the solver never sees the weights.
  WeightVector weights;
  // Mean absolute residual on the training data. NaN for private runs
  // unless requested, since it is not privatized.
  double objective = std::numeric_limits<double>::quiet_NaN();
  MomentMechanism mechanism = MomentMechanism::kNone;
  double epsilon_prime = 0.0;
  bool ridge_applied = false;
  double ridge = 0.0;
  std::vector<ReleaseRecord> releases;
};

inline WeightVector ComputeWeights(const Dataset& dataset,
                                   const ParameterVector& theta,
                                   double weight_cap) {
  const Vector residuals = dataset.responses() - dataset.features() * theta;
  const double floor = 1.0 / weight_cap;
  Vector weights(residuals.size());
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    weights[i] = 1.0 / std::max(floor, std::abs(residuals[i]));
  }
  return WeightVector(std::move(weights));
}

inline MomentPair ComputeMoments(const Dataset& dataset,
                                 const WeightVector& weights) {
  const RowMatrix& x = dataset.features();
  const double inv_n = 1.0 / dataset.size();
  const RowMatrix weighted = weights.values().asDiagonal() * x;
  MomentPair moments;
  moments.first = inv_n * (weighted.transpose() * dataset.responses());
  const Matrix gram = inv_n * (x.transpose() * weighted);
  // Mirror the lower triangle so B is exactly symmetric.
  moments.second = gram.selfadjointView<Eigen::Lower>();
  return moments;
}

inline double MeanAbsoluteResidual(const Dataset& dataset,
                                   const ParameterVector& theta) {
  return (dataset.responses() - dataset.features() * theta)
      .cwiseAbs()
      .mean();
}

struct SolveResult {
  ParameterVector theta;
  bool ridge_applied = false;
  double ridge = 0.0;
  // Reciprocal condition estimate of the factorized matrix.
  double rcond = 0.0;
};

// Matrices whose Cholesky reciprocal condition estimate falls below this are
// treated as singular.
inline constexpr double kMinReciprocalCondition = 1e-12;
inline constexpr double kRidgeFactor = 1e-8;

// Solves B theta = A by Cholesky. If B is not numerically positive definite,
// retries once with B + lambda I, lambda = 1e-8 tr(B) / d.
inline absl::StatusOr<SolveResult> SolveStep(const Vector& first_moment,
                                             const Matrix& second_moment) {
  const Eigen::Index dim = second_moment.rows();
  if (second_moment.cols() != dim || first_moment.size() != dim) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "solve_step dimension mismatch: B is %dx%d, A has %d entries", dim,
        second_moment.cols(), first_moment.size()));
  }
  auto attempt = [&](const Matrix& matrix, SolveResult& result) {
    Eigen::LLT<Matrix> llt(matrix);
    if (llt.info() != Eigen::Success) {
      result.rcond = 0.0;
      return false;
    }
    result.rcond = llt.rcond();
    if (!(result.rcond >= kMinReciprocalCondition)) return false;
    result.theta = llt.solve(first_moment);
    return result.theta.allFinite();
  };
  SolveResult result;
  if (attempt(second_moment, result)) return result;

  const double ridge = kRidgeFactor * second_moment.trace() / dim;
  if (ridge > 0.0 && std::isfinite(ridge)) {
    Matrix regularized = second_moment;
    regularized.diagonal().array() += ridge;
    if (attempt(regularized, result)) {
      result.ridge_applied = true;
      result.ridge = ridge;
      return result;
    }
  }
  return absl::FailedPreconditionError(absl::StrFormat(
      "second moment is singular even after ridge %g (rcond estimate %g, "
      "trace %g)",
      ridge, result.rcond, second_moment.trace()));
}

struct IrlsResult {
  ParameterVector theta;
  std::vector<IrlsState> trace;
};

// Alternates weight updates and weighted least-squares solves.
inline absl::StatusOr<IrlsResult> RunExactIrls(const Dataset& dataset,
                                               const IrlsConfig& config) {
  DP_IRLS_RETURN_IF_ERROR(config.Validate(dataset.dim()));
  IrlsResult result;
  result.theta = config.InitialTheta(dataset.dim());
  result.trace.reserve(config.iterations);
  for (int t = 1; t <= config.iterations; ++t) {
    IrlsState state;
    state.iteration = t;
    state.weights = ComputeWeights(dataset, result.theta, config.weight_cap);
    const MomentPair moments = ComputeMoments(dataset, state.weights);
    DP_IRLS_ASSIGN_OR_RETURN(SolveResult solved,
                             SolveStep(moments.first, moments.second));
    state.theta = std::move(solved.theta);
    state.ridge_applied = solved.ridge_applied;
    state.ridge = solved.ridge;
    state.objective = MeanAbsoluteResidual(dataset, state.theta);
    const double step = (state.theta - result.theta).norm();
    result.theta = state.theta;
    result.trace.push_back(std::move(state));
    if (config.exact_tolerance.has_value() && step <= *config.exact_tolerance) {
      break;
    }
  }
  return result;
}

// Anything that can produce the weighted moments of a private dataset at a
// given parameter. The private solver only touches data through this.
template <typename T>
concept MomentSource = requires(const T& source, const ParameterVector& theta,
                                double weight_cap) {
  { source.size() } -> std::convertible_to<int>;
  { source.dim() } -> std::convertible_to<int>;
  { source.Moments(theta, weight_cap) } -> std::convertible_to<MomentPair>;
};

class DatasetMomentSource {
 public:
  explicit DatasetMomentSource(const Dataset& dataset) : dataset_(&dataset) {}

  int size() const { return dataset_->size(); }
  int dim() const { return dataset_->dim(); }
  MomentPair Moments(const ParameterVector& theta, double weight_cap) const {
    return ComputeMoments(*dataset_,
                          ComputeWeights(*dataset_, theta, weight_cap));
  }
  double Objective(const ParameterVector& theta) const {
    return MeanAbsoluteResidual(*dataset_, theta);
  }

 private:
  const Dataset* dataset_;
};

struct PrivateIrlsOptions {
  MomentMechanism mechanism = MomentMechanism::kLaplace;
  // delta of the Gaussian mechanism itself; unused for Laplace. Reported
  // separately from any composition delta.
  double gaussian_failure_prob = 1e-6;
  // Invoked after every noise release, in release order.
  std::function<void(const ReleaseRecord&)> on_release;
  // Fills IrlsState::objective from the raw data. Off by default because the
  // value is not private.
  std::function<double(const ParameterVector&)> objective;
};

struct PrivateIrlsResult {
  ParameterVector theta;
  std::vector<IrlsState> trace;
  NoisePlan plan;
  bool gaussian_epsilon_warning = false;
};

// Runs exactly J iterations with two noise releases each, at the per-release
// epsilon the accountant assigns to `budget`. Each solve sees only the
// perturbed moments.
template <MomentSource Source>
absl::StatusOr<PrivateIrlsResult> RunPrivateIrls(
    const Source& source, const IrlsConfig& config, const PrivacyBudget& budget,
    const PrivateIrlsOptions& options, SeededRng& rng) {
  const int dim = source.dim();
  const int num_points = source.size();
  DP_IRLS_RETURN_IF_ERROR(config.Validate(dim));
  if (options.mechanism == MomentMechanism::kNone) {
    return absl::InvalidArgumentError(
        "private IRLS needs a Laplace or Gaussian first-moment mechanism");
  }
  PrivateIrlsResult result;
  DP_IRLS_ASSIGN_OR_RETURN(result.plan,
                           PlanForBudget(budget, config.iterations));
  const double eps = result.plan.per_release_epsilon;
  if (options.mechanism == MomentMechanism::kGaussian) {
    DP_IRLS_ASSIGN_OR_RETURN(
        GaussianNoiseSpec spec,
        GaussianNoiseSpec::Create(num_points, config.weight_cap, eps,
                                  options.gaussian_failure_prob));
    result.gaussian_epsilon_warning = spec.epsilon_outside_classical_range;
  }

  auto release = [&](IrlsState& state, ReleasedStatistic statistic,
                     std::string_view name) {
    ReleaseRecord record{state.iteration, statistic, name, eps};
    state.releases.push_back(record);
    if (options.on_release) options.on_release(record);
  };

  result.theta = config.InitialTheta(dim);
  result.trace.reserve(config.iterations);
  for (int t = 1; t <= config.iterations; ++t) {
    IrlsState state;
    state.iteration = t;
    state.mechanism = options.mechanism;
    state.epsilon_prime = eps;

    Vector noisy_first;
    Matrix noisy_second;
    {
      const MomentPair moments = source.Moments(result.theta, config.weight_cap);
      if (options.mechanism == MomentMechanism::kLaplace) {
        DP_IRLS_ASSIGN_OR_RETURN(
            noisy_first, LaplacePerturb(moments.first, eps, config.weight_cap,
                                        num_points, rng));
      } else {
        DP_IRLS_ASSIGN_OR_RETURN(
            noisy_first,
            GaussianPerturb(moments.first, eps, options.gaussian_failure_prob,
                            config.weight_cap, num_points, rng));
      }
      release(state, ReleasedStatistic::kFirstMoment,
              MechanismName(options.mechanism));
      DP_IRLS_ASSIGN_OR_RETURN(
          noisy_second, WishartPerturb(moments.second, eps, config.weight_cap,
                                       num_points, rng));
      release(state, ReleasedStatistic::kSecondMoment, "wishart");
    }

    DP_IRLS_ASSIGN_OR_RETURN(SolveResult solved,
                             SolveStep(noisy_first, noisy_second));
    state.theta = std::move(solved.theta);
    state.ridge_applied = solved.ridge_applied;
    state.ridge = solved.ridge;
    if (options.objective) state.objective = options.objective(state.theta);
    result.theta = state.theta;
    result.trace.push_back(std::move(state));
  }
  return result;
}

inline absl::StatusOr<PrivateIrlsResult> RunPrivateIrls(
    const Dataset& dataset, const IrlsConfig& config,
    const PrivacyBudget& budget, const PrivateIrlsOptions& options,
    SeededRng& rng) {
  return RunPrivateIrls(DatasetMomentSource(dataset), config, budget, options,
                        rng);
}

inline int CountReleases(const std::vector<IrlsState>& trace) {
  int total = 0;
  for (const IrlsState& state : trace) {
    total += static_cast<int>(state.releases.size());
  }
  return total;
}

// One JSON object per line: iteration, eps_prime, mechanism, objective
// (null when not computed), fallback, releases.
inline std::string FormatTraceJsonl(const std::vector<IrlsState>& trace) {
  std::string out;
  for (const IrlsState& state : trace) {
    nlohmann::ordered_json record;
    record["iteration"] = state.iteration;
    record["eps_prime"] = state.epsilon_prime;
    record["mechanism"] = std::string(MechanismName(state.mechanism));
    if (std::isfinite(state.objective)) {
      record["objective"] = state.objective;
    } else {
      record["objective"] = nullptr;
    }
    record["fallback"] = state.ridge_applied;
    record["releases"] = state.releases.size();
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dp_irls

#endif  // DP_IRLS_IRLS_HPP_
