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

// Sampling of replace-one neighboring datasets for the sensitivity and
// privacy-ratio checks.

#ifndef DP_IRLS_TESTS_NEIGHBORS_HPP_
#define DP_IRLS_TESTS_NEIGHBORS_HPP_

#include <random>
#include <utility>

#include "dp_irls/irls.hpp"
#include "dp_irls/types.hpp"
#include "oracles.hpp"

namespace dp_irls::testing {

struct NeighborPair {
  MomentPair original;
  MomentPair neighbor;
};

// Builds a random dataset of n points, swaps point `k`, and returns the
// weighted moments of both. Half the draws take the weights from
// ComputeWeights at a random theta (so s_k depends on the residual); the
// other half pin the swapped point's weight to an arbitrary value in
// (0, cap], including the cap itself.
inline NeighborPair SampleNeighborPair(int d, int n, double cap,
                                       std::mt19937_64& gen) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  RowMatrix x(n, d), x2;
  Vector y(n);
  std::vector<NeighborContribution> points;
  for (int i = 0; i < n; ++i) {
    NeighborContribution c = RandomContribution(d, cap, gen);
    for (int j = 0; j < d; ++j) x(i, j) = c.x[j];
    y[i] = c.y;
    points.push_back(std::move(c));
  }
  const int k = pick(gen);
  NeighborContribution swapped = RandomContribution(d, cap, gen);
  x2 = x;
  Vector y2 = y;
  for (int j = 0; j < d; ++j) x2(k, j) = swapped.x[j];
  y2[k] = swapped.y;

  Dataset a = *Dataset::Create(x, y);
  Dataset b = *Dataset::Create(x2, y2);
  Vector s(n), s2;
  if (unit(gen) < 0.5) {
    ParameterVector theta(d);
    for (int j = 0; j < d; ++j) theta[j] = 0.5 * normal(gen);
    s = ComputeWeights(a, theta, cap).values();
    s2 = ComputeWeights(b, theta, cap).values();
  } else {
    for (int i = 0; i < n; ++i) s[i] = points[i].s;
    s2 = s;
    s2[k] = swapped.s;
  }
  return {ComputeMoments(a, WeightVector(s)), ComputeMoments(b, WeightVector(s2))};
}

}  // namespace dp_irls::testing

#endif  // DP_IRLS_TESTS_NEIGHBORS_HPP_
