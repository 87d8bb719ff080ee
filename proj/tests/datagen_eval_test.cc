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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dp_irls/datagen.hpp"
#include "dp_irls/evaluation.hpp"
#include "dp_irls/irls.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

namespace dp_irls {
namespace {

SplitDataset Generate(int n, int d, uint64_t seed, double noise_var = 0.01,
                      TestSplit split = TestSplit::kHoldout) {
  SyntheticSpec spec;
  spec.num_points = n;
  spec.dim = d;
  spec.seed = seed;
  spec.noise_var = noise_var;
  spec.split = split;
  absl::StatusOr<SplitDataset> data = GenerateSynthetic(spec);
  EXPECT_TRUE(data.ok()) << data.status();
  return *std::move(data);
}

Dataset MakeDataset(const RowMatrix& x, const Vector& y) {
  absl::StatusOr<Dataset> d = Dataset::Create(x, y);
  EXPECT_TRUE(d.ok()) << d.status();
  return *std::move(d);
}

TEST(GenerateSyntheticTest, OutputIsNormalizedWithTightBounds) {
  const SplitDataset data = Generate(1000, 10, 7);
  EXPECT_TRUE(ValidateDataset(data.train.features(), data.train.responses()).ok());
  EXPECT_TRUE(ValidateDataset(data.test.features(), data.test.responses()).ok());
  const double max_norm =
      std::max(data.train.features().rowwise().norm().maxCoeff(),
               data.test.features().rowwise().norm().maxCoeff());
  const double max_y = std::max(data.train.responses().cwiseAbs().maxCoeff(),
                                data.test.responses().cwiseAbs().maxCoeff());
  EXPECT_NEAR(max_norm, 1.0, 1e-15);
  EXPECT_NEAR(max_y, 1.0, 1e-15);
}

TEST(GenerateSyntheticTest, SplitSizes) {
  for (int n : {2, 9, 10, 15, 500, 1000, 10000}) {
    const SplitDataset holdout = Generate(n, 3, 1);
    const int expected_test = std::max(1, static_cast<int>(std::lround(0.1 * n)));
    EXPECT_EQ(holdout.test.size(), expected_test) << n;
    EXPECT_EQ(holdout.train.size() + holdout.test.size(), n);
    EXPECT_EQ(holdout.train.dim(), 3);
    EXPECT_EQ(holdout.test.dim(), 3);
    const SplitDataset extra = Generate(n, 3, 1, 0.01, TestSplit::kExtra);
    EXPECT_EQ(extra.train.size(), n);
    EXPECT_EQ(extra.test.size(), expected_test);
  }
}

TEST(GenerateSyntheticTest, DeterministicPerSeed) {
  const SplitDataset a = Generate(300, 4, 11);
  const SplitDataset b = Generate(300, 4, 11);
  const SplitDataset c = Generate(300, 4, 12);
  EXPECT_TRUE(a.train.features() == b.train.features());
  EXPECT_TRUE(a.train.responses() == b.train.responses());
  EXPECT_TRUE(a.test.features() == b.test.features());
  EXPECT_TRUE(a.test.responses() == b.test.responses());
  EXPECT_TRUE(a.true_theta == b.true_theta);
  EXPECT_FALSE(a.train.features() == c.train.features());
}

TEST(GenerateSyntheticTest, TrainAndTestAreDisjointRows) {
  const SplitDataset data = Generate(200, 2, 3);
  for (int i = 0; i < data.test.size(); ++i) {
    for (int j = 0; j < data.train.size(); ++j) {
      EXPECT_FALSE(data.test.features().row(i) == data.train.features().row(j));
    }
  }
}

TEST(GenerateSyntheticTest, NearNoiselessDataRecoversGeneratingParameter) {
  const SplitDataset data = Generate(1000, 10, 5, 1e-24);
  IrlsConfig config;
  config.iterations = 10;
  config.weight_cap = 1e6;
  const IrlsResult fit = *RunExactIrls(data.train, config);
  EXPECT_LE((fit.theta - data.NormalizedTrueTheta()).norm(), 1e-6);
}

TEST(GenerateSyntheticTest, RejectsInvalidSpecs) {
  SyntheticSpec spec;
  spec.num_points = 1;
  EXPECT_FALSE(GenerateSynthetic(spec).ok());
  spec.num_points = 10;
  spec.dim = 0;
  EXPECT_FALSE(GenerateSynthetic(spec).ok());
  spec.dim = 2;
  spec.noise_var = 0.0;
  EXPECT_FALSE(GenerateSynthetic(spec).ok());
}

TEST(LoglikTest, PerfectPredictionAtUnitDensityIsZero) {
  const SplitDataset data = Generate(100, 3, 2, 1e-24);
  RowMatrix x = data.test.features();
  ParameterVector theta(3);
  theta << 0.2, -0.1, 0.3;
  const Dataset test = MakeDataset(x, x * theta);
  EXPECT_NEAR(*LoglikPerTestPoint(test, theta, 1.0 / (2 * std::numbers::pi)),
              0.0, 1e-15);
}

TEST(LoglikTest, SinglePointFormula) {
  RowMatrix x(1, 1);
  x << 0.5;
  Vector y(1);
  y << 0.9;
  ParameterVector theta(1);
  theta << 1.0;
  const double r = 0.4;
  EXPECT_NEAR(*LoglikPerTestPoint(MakeDataset(x, y), theta, 1.0),
              -0.5 * std::log(2 * std::numbers::pi) - r * r / 2, 1e-15);
  EXPECT_NEAR(*LoglikPerTestPoint(MakeDataset(x, y), theta, 0.25),
              -0.5 * std::log(2 * std::numbers::pi * 0.25) - r * r / 0.5,
              1e-15);
}

TEST(LoglikTest, StrictlyDecreasesWithDistanceFromFit) {
  const SplitDataset data = Generate(2000, 5, 9);
  IrlsConfig config;
  const ParameterVector best = RunExactIrls(data.train, config)->theta;
  const double var = EstimateResidualVariance(data.train, best);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  ParameterVector direction(5);
  for (int j = 0; j < 5; ++j) direction[j] = normal(gen);
  direction.normalize();
  double previous = *LoglikPerTestPoint(data.test, best, var);
  for (double step : {0.05, 0.1, 0.2, 0.4}) {
    const double current =
        *LoglikPerTestPoint(data.test, best + step * direction, var);
    EXPECT_LT(current, previous) << step;
    previous = current;
  }
}

TEST(LoglikTest, PermutationInvariant) {
  const SplitDataset data = Generate(500, 4, 10);
  ParameterVector theta = ParameterVector::Constant(4, 0.1);
  std::vector<int> order(data.test.size());
  for (int i = 0; i < data.test.size(); ++i) order[i] = i;
  std::mt19937_64 gen(2);
  std::shuffle(order.begin(), order.end(), gen);
  RowMatrix x(data.test.size(), 4);
  Vector y(data.test.size());
  for (int i = 0; i < data.test.size(); ++i) {
    x.row(i) = data.test.features().row(order[i]);
    y[i] = data.test.responses()[order[i]];
  }
  EXPECT_NEAR(*LoglikPerTestPoint(data.test, theta, 0.3),
              *LoglikPerTestPoint(MakeDataset(x, y), theta, 0.3), 1e-13);
}

TEST(LoglikTest, Errors) {
  const SplitDataset data = Generate(50, 2, 1);
  const ParameterVector theta = ParameterVector::Zero(2);
  EXPECT_FALSE(LoglikPerTestPoint(data.test, theta, 0.0).ok());
  EXPECT_FALSE(LoglikPerTestPoint(data.test, theta, -1.0).ok());
  EXPECT_FALSE(LoglikPerTestPoint(data.test, ParameterVector::Zero(3), 1.0).ok());
}

TEST(ResidualVarianceTest, FloorConstantAndOracle) {
  RowMatrix x(3, 1);
  x << 0.5, 0.25, 1.0;
  ParameterVector theta(1);
  theta << 0.8;
  EXPECT_EQ(EstimateResidualVariance(MakeDataset(x, x * theta), theta), 1e-8);
  Vector shifted = x * theta + Vector::Constant(3, -0.2);
  EXPECT_NEAR(EstimateResidualVariance(MakeDataset(x, shifted), theta), 0.04,
              1e-16);

  const SplitDataset data = Generate(3000, 6, 4);
  const ParameterVector guess = ParameterVector::Constant(6, 0.05);
  const Vector r = data.train.responses() - data.train.features() * guess;
  const std::vector<double> rv(r.data(), r.data() + r.size());
  EXPECT_NEAR(EstimateResidualVariance(data.train, guess),
              testing::TwoPassMeanSquare(rv), 1e-12);
}

TEST(EvaluateTest, UsesTrainingVarianceForTestLikelihood) {
  const SplitDataset data = Generate(1000, 3, 8);
  const ParameterVector theta = RunExactIrls(data.train, IrlsConfig{})->theta;
  const EvalResult result = *Evaluate(data.train, data.test, theta);
  const double var = EstimateResidualVariance(data.train, theta);
  EXPECT_EQ(result.residual_var_estimate, var);
  EXPECT_EQ(result.loglik_per_point, *LoglikPerTestPoint(data.test, theta, var));
  EXPECT_TRUE(std::isfinite(result.loglik_per_point));
}

}  // namespace
}  // namespace dp_irls
