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

#include "dp_irls/types.hpp"

#include <cstdio>
#include <random>
#include <string>

#include "dp_irls/csv.hpp"
#include "gtest/gtest.h"

namespace dp_irls {
namespace {

RowMatrix Rows(std::initializer_list<std::initializer_list<double>> rows) {
  RowMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector Vec(std::initializer_list<double> values) {
  Vector v(values.size());
  int i = 0;
  for (double e : values) v[i++] = e;
  return v;
}

TEST(ValidateDatasetTest, AcceptsRowOnUnitSphere) {
  absl::StatusOr<Dataset> d = ValidateDataset(Rows({{0.6, 0.8}}), Vec({1.0}));
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->size(), 1);
  EXPECT_EQ(d->dim(), 2);
}

TEST(ValidateDatasetTest, RejectsRowOutsideBallAndNamesRow) {
  absl::StatusOr<Dataset> d =
      ValidateDataset(Rows({{0.1, 0.1}, {1.0, 1.0}}), Vec({0.5, 0.5}));
  ASSERT_FALSE(d.ok());
  EXPECT_EQ(d.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(d.status().message().find("row 1"), std::string::npos)
      << d.status();
}

TEST(ValidateDatasetTest, RejectsLargeResponse) {
  absl::StatusOr<Dataset> d = ValidateDataset(Rows({{0.1}}), Vec({1.5}));
  EXPECT_FALSE(d.ok());
}

TEST(ValidateDatasetTest, AcceptsAllZero) {
  EXPECT_TRUE(ValidateDataset(RowMatrix::Zero(3, 2), Vector::Zero(3)).ok());
}

TEST(ValidateDatasetTest, RejectsDimensionMismatchAndEmpty) {
  EXPECT_FALSE(ValidateDataset(RowMatrix::Zero(3, 2), Vector::Zero(2)).ok());
  EXPECT_FALSE(ValidateDataset(RowMatrix::Zero(0, 2), Vector::Zero(0)).ok());
  EXPECT_FALSE(ValidateDataset(RowMatrix::Zero(2, 0), Vector::Zero(2)).ok());
}

TEST(NormalizeDatasetTest, ScalesByLargestRowNormAndResponse) {
  absl::StatusOr<Dataset> d =
      NormalizeDataset(Rows({{3, 4}, {0, 1}}), Vec({2, -4}));
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_DOUBLE_EQ(d->features()(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(d->features()(0, 1), 0.8);
  EXPECT_DOUBLE_EQ(d->features()(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(d->features()(1, 1), 0.2);
  EXPECT_DOUBLE_EQ(d->responses()[0], 0.5);
  EXPECT_DOUBLE_EQ(d->responses()[1], -1.0);
}

TEST(NormalizeDatasetTest, AllZeroPassesThrough) {
  absl::StatusOr<Dataset> d =
      NormalizeDataset(RowMatrix::Zero(2, 3), Vector::Zero(2));
  ASSERT_TRUE(d.ok());
  EXPECT_TRUE(d->features().isZero(0));
  EXPECT_TRUE(d->responses().isZero(0));
}

TEST(NormalizeDatasetTest, IdempotentBitwiseAndUnitMaxNorm) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 17, d = 1 + trial % 5;
    RowMatrix x(n, d);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) x(i, j) = normal(gen);
      y[i] = normal(gen);
    }
    absl::StatusOr<Dataset> once = NormalizeDataset(x, y);
    ASSERT_TRUE(once.ok()) << once.status();
    EXPECT_NEAR(once->features().rowwise().norm().maxCoeff(), 1.0, 1e-12);
    EXPECT_NEAR(once->responses().cwiseAbs().maxCoeff(), 1.0, 1e-12);
    absl::StatusOr<Dataset> twice =
        NormalizeDataset(once->features(), once->responses());
    ASSERT_TRUE(twice.ok());
    EXPECT_TRUE(twice->features() == once->features());
    EXPECT_TRUE(twice->responses() == once->responses());
  }
}

TEST(NormalizeDatasetTest, AlreadyNormalizedIsUnchanged) {
  RowMatrix x = Rows({{0.6, 0.8}, {0.1, -0.2}});
  Vector y = Vec({-1.0, 0.25});
  absl::StatusOr<Dataset> d = NormalizeDataset(x, y);
  ASSERT_TRUE(d.ok());
  EXPECT_TRUE(d->features() == x);
  EXPECT_TRUE(d->responses() == y);
}

TEST(IrlsConfigTest, Validation) {
  IrlsConfig config;
  EXPECT_TRUE(config.Validate(3).ok());
  config.iterations = 0;
  EXPECT_FALSE(config.Validate(3).ok());
  config.iterations = 1;
  config.weight_cap = 0.0;
  EXPECT_FALSE(config.Validate(3).ok());
  config.weight_cap = 1.0;
  config.theta_init = Vector::Zero(2);
  EXPECT_FALSE(config.Validate(3).ok());
  EXPECT_TRUE(config.InitialTheta(2).isZero(0));
  EXPECT_EQ(IrlsConfig::kNormExponent, 1);
}

TEST(CsvTest, FormatDoubleRoundTripsAndUsesDot) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(gen) * std::pow(10.0, (i % 40) - 20);
    const std::string text = FormatDouble(v);
    EXPECT_EQ(text.find(','), std::string::npos);
    absl::StatusOr<double> back = ParseDouble(text);
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, v) << text;
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
}

TEST(CsvTest, QuotedFieldsRoundTrip) {
  const CsvRecord record{"plain", "with,comma", "with \"quote\"", "multi\nline",
                         ""};
  absl::StatusOr<std::vector<CsvRecord>> parsed =
      ParseCsv(FormatCsvRecord(record) + FormatCsvRecord({"a", "b"}));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  ASSERT_EQ(parsed->size(), 2u);
  EXPECT_EQ((*parsed)[0], record);
  EXPECT_EQ((*parsed)[1], (CsvRecord{"a", "b"}));
}

TEST(CsvTest, MalformedInputIsRejected) {
  EXPECT_FALSE(ParseCsv("\"open").ok());
  EXPECT_FALSE(ParseCsv("ab\"c\n").ok());
  EXPECT_FALSE(ParseDouble("1.5x").ok());
  EXPECT_FALSE(ParseDouble("").ok());
}

TEST(DatasetCsvTest, ParsesWithAndWithoutHeader) {
  absl::StatusOr<RawDataset> with =
      ParseDatasetCsv("x1,x2,y\n0.6,0.8,1\n0,0.5,-0.25\n", true);
  ASSERT_TRUE(with.ok()) << with.status();
  EXPECT_EQ(with->features.rows(), 2);
  EXPECT_EQ(with->features.cols(), 2);
  EXPECT_EQ(with->responses[1], -0.25);
  absl::StatusOr<RawDataset> without =
      ParseDatasetCsv("0.6,0.8,1\r\n0,0.5,-0.25\r\n", false);
  ASSERT_TRUE(without.ok());
  EXPECT_TRUE(without->features == with->features);
  // Reading a header as data fails loudly.
  EXPECT_FALSE(ParseDatasetCsv("x1,x2,y\n0.6,0.8,1\n", false).ok());
  EXPECT_FALSE(ParseDatasetCsv("1,2,3\n1,2\n", false).ok());
  EXPECT_FALSE(ParseDatasetCsv("1\n", false).ok());
}

TEST(DatasetCsvTest, WriteThenLoadIsExact) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  RowMatrix x(20, 3);
  Vector y(20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = normal(gen);
    y[i] = normal(gen);
  }
  absl::StatusOr<Dataset> d = NormalizeDataset(x, y);
  ASSERT_TRUE(d.ok());
  const std::string path = ::testing::TempDir() + "/dataset_roundtrip.csv";
  for (bool header : {true, false}) {
    ASSERT_TRUE(WriteDatasetCsv(*d, path, header).ok());
    absl::StatusOr<RawDataset> back = LoadDatasetCsv(path, header);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_TRUE(back->features == d->features());
    EXPECT_TRUE(back->responses == d->responses());
  }
  std::remove(path.c_str());
  EXPECT_EQ(LoadDatasetCsv(path, false).status().code(),
            absl::StatusCode::kNotFound);
}

}  // namespace
}  // namespace dp_irls
