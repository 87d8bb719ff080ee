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

// Privacy accounting for J IRLS iterations, each of which releases two
// statistics (the first and second moments). Every regime splits the total
// budget evenly across the 2J releases.

#ifndef DP_IRLS_ACCOUNTANT_HPP_
#define DP_IRLS_ACCOUNTANT_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace dp_irls {

enum class CompositionRegime { kCdp, kConventional, kAdvanced };

inline std::string_view RegimeName(CompositionRegime regime) {
  switch (regime) {
    case CompositionRegime::kCdp:
      return "cdp";
    case CompositionRegime::kConventional:
      return "conventional";
    case CompositionRegime::kAdvanced:
      return "advanced";
  }
  return "unknown";
}

inline constexpr double kDefaultAdvancedFailureProb = 1e-6;
inline constexpr int kReleasesPerIteration = 2;

// (mu, tau)-concentrated DP: privacy loss with mean mu and sub-Gaussian
// parameter tau.
struct CdpParams {
  double mu = 0.0;
  double tau = 0.0;
};

class PrivacyBudget {
 public:
  // `failure_prob` must be 0 for kCdp and kConventional and lie in (0, 1)
  // for kAdvanced.
  static absl::StatusOr<PrivacyBudget> Create(double epsilon,
                                              double failure_prob,
                                              CompositionRegime regime) {
    if (!(epsilon > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("total epsilon must be positive, got %g", epsilon));
    }
    if (regime == CompositionRegime::kAdvanced) {
      if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "advanced composition needs delta in (0, 1), got %g",
            failure_prob));
      }
    } else if (failure_prob != 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s regime takes delta = 0, got %g",
                          std::string(RegimeName(regime)), failure_prob));
    }
    return PrivacyBudget(epsilon, failure_prob, regime);
  }

  static absl::StatusOr<PrivacyBudget> Cdp(double epsilon) {
    return Create(epsilon, 0.0, CompositionRegime::kCdp);
  }
  static absl::StatusOr<PrivacyBudget> Conventional(double epsilon) {
    return Create(epsilon, 0.0, CompositionRegime::kConventional);
  }
  static absl::StatusOr<PrivacyBudget> Advanced(
      double epsilon, double failure_prob = kDefaultAdvancedFailureProb) {
    return Create(epsilon, failure_prob, CompositionRegime::kAdvanced);
  }

  double epsilon() const { return epsilon_; }
  double failure_prob() const { return failure_prob_; }
  CompositionRegime regime() const { return regime_; }

 private:
  PrivacyBudget(double epsilon, double failure_prob, CompositionRegime regime)
      : epsilon_(epsilon), failure_prob_(failure_prob), regime_(regime) {}

  double epsilon_;
  double failure_prob_;
  CompositionRegime regime_;
};

struct NoisePlan {
  CompositionRegime regime = CompositionRegime::kCdp;
  int iterations = 0;
  double per_release_epsilon = 0.0;
  int releases_per_iteration = kReleasesPerIteration;
  int total_releases = 0;
  // Composed (mu, tau) over all releases; set for the CDP regime only.
  std::optional<CdpParams> cdp_params;
};

namespace internal {

inline absl::Status CheckEpsilonAndIterations(double epsilon, int iterations) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("total epsilon must be positive, got %g", epsilon));
  }
  if (iterations < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("iteration count must be >= 1, got %d", iterations));
  }
  return absl::OkStatus();
}

inline NoisePlan MakePlan(CompositionRegime regime, int iterations,
                          double per_release_epsilon) {
  NoisePlan plan;
  plan.regime = regime;
  plan.iterations = iterations;
  plan.per_release_epsilon = per_release_epsilon;
  plan.total_releases = kReleasesPerIteration * iterations;
  return plan;
}

}  // namespace internal

// An eps-DP release is (eps (e^eps - 1) / 2, eps)-CDP.
inline CdpParams CdpOfDp(double epsilon) {
  return CdpParams{epsilon * std::expm1(epsilon) / 2.0, epsilon};
}

// mu adds linearly, tau in quadrature.
inline absl::StatusOr<CdpParams> ComposeCdp(std::span<const CdpParams> terms) {
  if (terms.empty()) {
    return absl::InvalidArgumentError("cannot compose an empty list");
  }
  double mu = 0.0;
  double tau_squared = 0.0;
  for (const CdpParams& term : terms) {
    if (!(term.mu >= 0.0) || !(term.tau >= 0.0)) {
      return absl::InvalidArgumentError("CDP parameters must be nonnegative");
    }
    mu += term.mu;
    tau_squared += term.tau * term.tau;
  }
  return CdpParams{mu, std::sqrt(tau_squared)};
}

// eps' = sqrt(eps / J). Chosen from the second-order bound
// 2J * eps'^2 / 2 <= eps; the exact composed mu is slightly above eps and is
// reported in cdp_params.
inline absl::StatusOr<NoisePlan> CdpPerRelease(double epsilon, int iterations) {
  if (absl::Status s = internal::CheckEpsilonAndIterations(epsilon, iterations);
      !s.ok()) {
    return s;
  }
  const double per_release = std::sqrt(epsilon / iterations);
  NoisePlan plan =
      internal::MakePlan(CompositionRegime::kCdp, iterations, per_release);
  const CdpParams single = CdpOfDp(per_release);
  const double releases = plan.total_releases;
  plan.cdp_params =
      CdpParams{releases * single.mu, std::sqrt(releases) * single.tau};
  return plan;
}

// Basic composition: 2J releases at eps / (2J) each.
inline absl::StatusOr<NoisePlan> ConventionalPerRelease(double epsilon,
                                                        int iterations) {
  if (absl::Status s = internal::CheckEpsilonAndIterations(epsilon, iterations);
      !s.ok()) {
    return s;
  }
  return internal::MakePlan(CompositionRegime::kConventional, iterations,
                            epsilon / (kReleasesPerIteration * iterations));
}

// Total epsilon of k-fold advanced composition of eps'-DP releases:
// sqrt(2 k log(1/delta)) eps' + k eps' (e^eps' - 1).
inline double AdvancedCompositionEpsilon(double per_release_epsilon,
                                         int releases, double failure_prob) {
  const double k = releases;
  return std::sqrt(2.0 * k * std::log(1.0 / failure_prob)) *
             per_release_epsilon +
         k * per_release_epsilon * std::expm1(per_release_epsilon);
}

inline constexpr double kBisectionTolerance = 1e-12;

// Largest eps' in (0, eps] whose 2J-fold advanced composition stays within
// eps, by bisection.
inline absl::StatusOr<NoisePlan> AdvancedPerRelease(double epsilon,
                                                    double failure_prob,
                                                    int iterations) {
  if (absl::Status s = internal::CheckEpsilonAndIterations(epsilon, iterations);
      !s.ok()) {
    return s;
  }
  if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "advanced composition needs delta in (0, 1), got %g", failure_prob));
  }
  const int releases = kReleasesPerIteration * iterations;
  auto loss = [&](double e) {
    return AdvancedCompositionEpsilon(e, releases, failure_prob);
  };
  double feasible = 0.0;
  double infeasible = epsilon;
  if (loss(infeasible) <= epsilon) {
    feasible = infeasible;
  } else {
    while (infeasible - feasible > kBisectionTolerance) {
      const double mid = 0.5 * (feasible + infeasible);
      if (mid == feasible || mid == infeasible) break;
      if (loss(mid) <= epsilon) {
        feasible = mid;
      } else {
        infeasible = mid;
      }
    }
  }
  if (!(feasible > 0.0)) {
    return absl::InternalError(absl::StrFormat(
        "bisection found no positive eps' for eps=%g delta=%g J=%d", epsilon,
        failure_prob, iterations));
  }
  return internal::MakePlan(CompositionRegime::kAdvanced, iterations,
                            feasible);
}

inline absl::StatusOr<NoisePlan> PlanForBudget(const PrivacyBudget& budget,
                                               int iterations) {
  switch (budget.regime()) {
    case CompositionRegime::kCdp:
      return CdpPerRelease(budget.epsilon(), iterations);
    case CompositionRegime::kConventional:
      return ConventionalPerRelease(budget.epsilon(), iterations);
    case CompositionRegime::kAdvanced:
      return AdvancedPerRelease(budget.epsilon(), budget.failure_prob(),
                                iterations);
  }
  return absl::InternalError("unknown composition regime");
}

}  // namespace dp_irls

#endif  // DP_IRLS_ACCOUNTANT_HPP_
