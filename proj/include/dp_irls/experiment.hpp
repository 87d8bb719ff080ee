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

// Experiment grid over (mechanism, N, seed): synthetic data, one solver run
// per cell, test log-likelihood, and per-(mechanism, N) aggregation.

#ifndef DP_IRLS_EXPERIMENT_HPP_
#define DP_IRLS_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "dp_irls/accountant.hpp"
#include "dp_irls/csv.hpp"
#include "dp_irls/datagen.hpp"
#include "dp_irls/evaluation.hpp"
#include "dp_irls/internal/status_macros.hpp"
#include "dp_irls/irls.hpp"
#include "dp_irls/rng.hpp"

namespace dp_irls {

// Enumerator order is the canonical output order.
enum class GridMechanism {
  kCdpLaplace,
  kCdpGaussian,
  kDpConventional,
  kDpAdvanced,
  kNonPrivate,
};

inline constexpr GridMechanism kAllGridMechanisms[] = {
    GridMechanism::kCdpLaplace, GridMechanism::kCdpGaussian,
    GridMechanism::kDpConventional, GridMechanism::kDpAdvanced,
    GridMechanism::kNonPrivate};

inline std::string_view GridMechanismName(GridMechanism mechanism) {
  switch (mechanism) {
    case GridMechanism::kCdpLaplace:
      return "cdp-lap";
    case GridMechanism::kCdpGaussian:
      return "cdp-gau";
    case GridMechanism::kDpConventional:
      return "dp-conventional";
    case GridMechanism::kDpAdvanced:
      return "dp-advanced";
    case GridMechanism::kNonPrivate:
      return "non-private";
  }
  return "unknown";
}

inline absl::StatusOr<GridMechanism> ParseGridMechanism(std::string_view name) {
  for (GridMechanism mechanism : kAllGridMechanisms) {
    if (GridMechanismName(mechanism) == name) return mechanism;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown mechanism '%s' (expected cdp-lap, cdp-gau, "
                      "dp-conventional, dp-advanced or non-private)",
                      std::string(name)));
}

struct ExperimentGrid {
  std::vector<int> num_points = {500, 1000, 2000, 5000, 10000};
  int dim = 10;
  double epsilon = 0.9;
  int iterations = 10;
  double weight_cap = 100.0;
  // Used both by the Gaussian mechanism and by advanced composition.
  double failure_prob = kDefaultAdvancedFailureProb;
  double noise_var = 0.01;
  TestSplit split = TestSplit::kHoldout;
  std::vector<GridMechanism> mechanisms = {std::begin(kAllGridMechanisms),
                                           std::end(kAllGridMechanisms)};
  int num_seeds = 20;
  uint64_t base_seed = 0;

  absl::Status Validate() const {
    if (num_points.empty()) {
      return absl::InvalidArgumentError("grid needs at least one N value");
    }
    for (int n : num_points) {
      if (n < 2) return absl::InvalidArgumentError("grid N values must be >= 2");
    }
    if (mechanisms.empty()) {
      return absl::InvalidArgumentError("grid needs at least one mechanism");
    }
    if (num_seeds < 1) return absl::InvalidArgumentError("seeds must be >= 1");
    if (dim < 1) return absl::InvalidArgumentError("d must be >= 1");
    if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be > 0");
    if (iterations < 1) return absl::InvalidArgumentError("iters must be >= 1");
    if (!(weight_cap > 0.0)) {
      return absl::InvalidArgumentError("weight cap must be > 0");
    }
    if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
      return absl::InvalidArgumentError("delta-f must lie in (0, 1)");
    }
    return absl::OkStatus();
  }
};

struct ResultRow {
  std::string mechanism;
  int num_points = 0;
  int seed = 0;
  double loglik_per_point = 0.0;
  double eps_prime = 0.0;
  int64_t wall_time_ms = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

using ResultsTable = std::vector<ResultRow>;

struct SummaryRow {
  std::string mechanism;
  int num_points = 0;
  double mean_loglik = 0.0;
  double std_error = 0.0;
  int num_seeds = 0;
};

// Dataset seeds depend on (base, N, seed) only, so every mechanism sees the
// same datasets; noise seeds also mix in the mechanism.
inline uint64_t DataSeed(uint64_t base_seed, int num_points, int seed) {
  return DeriveSeed({base_seed, static_cast<uint64_t>(num_points),
                     static_cast<uint64_t>(seed)});
}

inline uint64_t NoiseSeed(uint64_t base_seed, GridMechanism mechanism,
                          int num_points, int seed) {
  return DeriveSeed({base_seed, 0x4e4f495345ULL,
                     static_cast<uint64_t>(mechanism),
                     static_cast<uint64_t>(num_points),
                     static_cast<uint64_t>(seed)});
}

struct CellOutcome {
  ParameterVector theta;
  double eps_prime = 0.0;
  std::vector<IrlsState> trace;
};

// Fits one mechanism on an already-generated split.
inline absl::StatusOr<CellOutcome> FitMechanism(const ExperimentGrid& grid,
                                                GridMechanism mechanism,
                                                const Dataset& train,
                                                SeededRng& rng) {
  IrlsConfig config;
  config.iterations = grid.iterations;
  config.weight_cap = grid.weight_cap;
  if (mechanism == GridMechanism::kNonPrivate) {
    DP_IRLS_ASSIGN_OR_RETURN(IrlsResult exact, RunExactIrls(train, config));
    return CellOutcome{std::move(exact.theta), 0.0, std::move(exact.trace)};
  }
  std::optional<absl::StatusOr<PrivacyBudget>> budget;
  PrivateIrlsOptions options;
  options.gaussian_failure_prob = grid.failure_prob;
  switch (mechanism) {
    case GridMechanism::kCdpLaplace:
      budget = PrivacyBudget::Cdp(grid.epsilon);
      options.mechanism = MomentMechanism::kLaplace;
      break;
    case GridMechanism::kCdpGaussian:
      budget = PrivacyBudget::Cdp(grid.epsilon);
      options.mechanism = MomentMechanism::kGaussian;
      break;
    case GridMechanism::kDpConventional:
      budget = PrivacyBudget::Conventional(grid.epsilon);
      options.mechanism = MomentMechanism::kLaplace;
      break;
    case GridMechanism::kDpAdvanced:
      budget = PrivacyBudget::Advanced(grid.epsilon, grid.failure_prob);
      options.mechanism = MomentMechanism::kLaplace;
      break;
    case GridMechanism::kNonPrivate:
      break;
  }
  if (!budget->ok()) return budget->status();
  DP_IRLS_ASSIGN_OR_RETURN(
      PrivateIrlsResult fit,
      RunPrivateIrls(train, config, **budget, options, rng));
  return CellOutcome{std::move(fit.theta), fit.plan.per_release_epsilon,
                     std::move(fit.trace)};
}

struct RunGridOptions {
  // 0 selects the hardware concurrency, capped by DP_IRLS_THREADS.
  int threads = 0;
  // When false the wall_time_ms column is written as 0 so reruns are
  // byte-identical.
  bool record_timing = false;
};

inline int ResolveThreadCount(int requested, size_t num_cells) {
  int threads = requested > 0
                    ? requested
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DP_IRLS_THREADS"); env != nullptr) {
    int cap = 0;
    if (absl::SimpleAtoi(env, &cap) && cap > 0) threads = std::min(threads, cap);
  }
  threads = std::max(threads, 1);
  return std::min<int>(threads, static_cast<int>(std::max<size_t>(num_cells, 1)));
}

namespace internal {

struct GridCell {
  GridMechanism mechanism;
  int num_points;
  int seed;
};

inline ResultRow RunCell(const ExperimentGrid& grid, const GridCell& cell,
                         bool record_timing) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.mechanism = std::string(GridMechanismName(cell.mechanism));
  row.num_points = cell.num_points;
  row.seed = cell.seed;

  SyntheticSpec spec;
  spec.num_points = cell.num_points;
  spec.dim = grid.dim;
  spec.noise_var = grid.noise_var;
  spec.split = grid.split;
  spec.seed = DataSeed(grid.base_seed, cell.num_points, cell.seed);
  absl::Status status = absl::OkStatus();
  absl::StatusOr<SplitDataset> data = GenerateSynthetic(spec);
  if (data.ok()) {
    SeededRng rng(NoiseSeed(grid.base_seed, cell.mechanism, cell.num_points,
                            cell.seed),
                  /*stream_id=*/1);
    absl::StatusOr<CellOutcome> fit =
        FitMechanism(grid, cell.mechanism, data->train, rng);
    if (fit.ok()) {
      row.eps_prime = fit->eps_prime;
      absl::StatusOr<EvalResult> eval =
          Evaluate(data->train, data->test, fit->theta);
      if (eval.ok()) {
        row.loglik_per_point = eval->loglik_per_point;
      } else {
        status = eval.status();
      }
    } else {
      status = fit.status();
    }
  } else {
    status = data.status();
  }
  if (!status.ok()) {
    row.status = std::string(status.message());
    row.loglik_per_point = std::nan("");
  }
  if (record_timing) {
    row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
  return row;
}

}  // namespace internal

// Runs every (mechanism, N, seed) cell. Per-cell failures land in the row's
// status column; the returned table is sorted by (mechanism, N, seed)
// whatever the execution order.
inline absl::StatusOr<ResultsTable> RunGrid(const ExperimentGrid& grid,
                                            const RunGridOptions& options = {}) {
  DP_IRLS_RETURN_IF_ERROR(grid.Validate());
  std::vector<GridMechanism> mechanisms = grid.mechanisms;
  std::sort(mechanisms.begin(), mechanisms.end());
  mechanisms.erase(std::unique(mechanisms.begin(), mechanisms.end()),
                   mechanisms.end());
  std::vector<int> sizes = grid.num_points;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<internal::GridCell> cells;
  for (GridMechanism mechanism : mechanisms) {
    for (int n : sizes) {
      for (int seed = 0; seed < grid.num_seeds; ++seed) {
        cells.push_back({mechanism, n, seed});
      }
    }
  }

  // Each worker writes only its own slots.
  ResultsTable table(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      table[i] = internal::RunCell(grid, cells[i], options.record_timing);
    }
  };
  const int threads = ResolveThreadCount(options.threads, cells.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return table;
}

inline std::vector<const ResultRow*> FailedRows(const ResultsTable& table) {
  std::vector<const ResultRow*> failed;
  for (const ResultRow& row : table) {
    if (!row.ok()) failed.push_back(&row);
  }
  return failed;
}

// Mean and standard error (sample std / sqrt(n)) of the successful rows,
// grouped by (mechanism, N) in order of first appearance.
inline std::vector<SummaryRow> Aggregate(const ResultsTable& table) {
  std::vector<std::pair<std::string, int>> order;
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const ResultRow& row : table) {
    if (!row.ok()) continue;
    auto key = std::make_pair(row.mechanism, row.num_points);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(row.loglik_per_point);
  }
  std::vector<SummaryRow> summary;
  summary.reserve(order.size());
  for (const auto& key : order) {
    const std::vector<double>& values = groups[key];
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double sum_sq = 0.0;
    for (double v : values) sum_sq += (v - mean) * (v - mean);
    const double std_error =
        values.size() > 1 ? std::sqrt(sum_sq / (n - 1.0)) / std::sqrt(n) : 0.0;
    summary.push_back({key.first, key.second, mean, std_error,
                       static_cast<int>(values.size())});
  }
  return summary;
}

inline const CsvRecord& ResultsCsvHeader() {
  static const CsvRecord* header = new CsvRecord{
      "mechanism", "N", "seed", "loglik_per_point", "eps_prime",
      "wall_time_ms", "status"};
  return *header;
}

inline const CsvRecord& SummaryCsvHeader() {
  static const CsvRecord* header = new CsvRecord{
      "mechanism", "N", "mean_loglik", "std_error", "n_seeds"};
  return *header;
}

inline std::string FormatResultsCsv(const ResultsTable& table, bool header) {
  std::string out;
  if (header) out += FormatCsvRecord(ResultsCsvHeader());
  for (const ResultRow& row : table) {
    out += FormatCsvRecord({row.mechanism, std::to_string(row.num_points),
                            std::to_string(row.seed),
                            FormatDouble(row.loglik_per_point),
                            FormatDouble(row.eps_prime),
                            std::to_string(row.wall_time_ms), row.status});
  }
  return out;
}

inline std::string FormatSummaryCsv(const std::vector<SummaryRow>& summary,
                                    bool header) {
  std::string out;
  if (header) out += FormatCsvRecord(SummaryCsvHeader());
  for (const SummaryRow& row : summary) {
    out += FormatCsvRecord({row.mechanism, std::to_string(row.num_points),
                            FormatDouble(row.mean_loglik),
                            FormatDouble(row.std_error),
                            std::to_string(row.num_seeds)});
  }
  return out;
}

inline absl::Status WriteResultsCsv(const ResultsTable& table,
                                    const std::string& path, bool header) {
  return WriteFile(path, FormatResultsCsv(table, header));
}

inline absl::Status WriteSummaryCsv(const std::vector<SummaryRow>& summary,
                                    const std::string& path, bool header) {
  return WriteFile(path, FormatSummaryCsv(summary, header));
}

inline absl::StatusOr<ResultsTable> ParseResultsCsv(std::string_view text,
                                                    bool header) {
  DP_IRLS_ASSIGN_OR_RETURN(std::vector<CsvRecord> records, ParseCsv(text));
  ResultsTable table;
  for (size_t r = header ? 1 : 0; r < records.size(); ++r) {
    const CsvRecord& record = records[r];
    if (record.size() != ResultsCsvHeader().size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("results record %d has %d fields", r, record.size()));
    }
    ResultRow row;
    row.mechanism = record[0];
    int64_t wall = 0;
    if (!absl::SimpleAtoi(record[1], &row.num_points) ||
        !absl::SimpleAtoi(record[2], &row.seed) ||
        !absl::SimpleAtoi(record[5], &wall)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("results record %d has a malformed integer", r));
    }
    row.wall_time_ms = wall;
    DP_IRLS_ASSIGN_OR_RETURN(row.loglik_per_point, ParseDouble(record[3]));
    DP_IRLS_ASSIGN_OR_RETURN(row.eps_prime, ParseDouble(record[4]));
    row.status = record[6];
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace dp_irls

#endif  // DP_IRLS_EXPERIMENT_HPP_
