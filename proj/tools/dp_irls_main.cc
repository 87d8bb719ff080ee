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

// Command-line front end: runs the experiment grid (default), fits a single
// dataset from CSV (`fit`), or exports a synthetic dataset (`generate`).

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "dp_irls/dp_irls.hpp"

namespace {

using ::dp_irls::ExperimentGrid;
using ::dp_irls::GridMechanism;

const std::map<std::string, bool> kOnOff{{"on", true}, {"off", false}};

absl::StatusOr<std::vector<GridMechanism>> ParseMechanismList(
    const std::string& text) {
  std::vector<GridMechanism> mechanisms;
  for (absl::string_view name : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    absl::StatusOr<GridMechanism> mechanism =
        dp_irls::ParseGridMechanism(std::string(name));
    if (!mechanism.ok()) return mechanism.status();
    mechanisms.push_back(*mechanism);
  }
  return mechanisms;
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return 1;
}

int RunGridCommand(const ExperimentGrid& grid, const std::string& out_csv,
                   const std::string& summary_csv, const std::string& out_svg,
                   bool header, const dp_irls::RunGridOptions& options) {
  absl::StatusOr<dp_irls::ResultsTable> table = dp_irls::RunGrid(grid, options);
  if (!table.ok()) return Fail(table.status());
  const std::vector<dp_irls::SummaryRow> summary = dp_irls::Aggregate(*table);

  if (!out_csv.empty()) {
    if (absl::Status s = dp_irls::WriteResultsCsv(*table, out_csv, header);
        !s.ok()) {
      return Fail(s);
    }
  } else {
    std::cout << dp_irls::FormatResultsCsv(*table, header);
  }
  if (!summary_csv.empty()) {
    if (absl::Status s = dp_irls::WriteSummaryCsv(summary, summary_csv, header);
        !s.ok()) {
      return Fail(s);
    }
  }
  if (!out_svg.empty() && !summary.empty()) {
    if (absl::Status s = dp_irls::WriteSvgChart(summary, out_svg); !s.ok()) {
      return Fail(s);
    }
  }
  for (const dp_irls::SummaryRow& row : summary) {
    std::cerr << absl::StrFormat("%-16s N=%-6d mean=%10.4f se=%8.4f n=%d\n",
                                 row.mechanism, row.num_points, row.mean_loglik,
                                 row.std_error, row.num_seeds);
  }
  const std::vector<const dp_irls::ResultRow*> failed =
      dp_irls::FailedRows(*table);
  if (!failed.empty()) {
    std::cerr << absl::StrFormat("%d of %d cells failed:\n", failed.size(),
                                 table->size());
    for (const dp_irls::ResultRow* row : failed) {
      std::cerr << absl::StrFormat("  %s N=%d seed=%d: %s\n", row->mechanism,
                                   row->num_points, row->seed, row->status);
    }
    return 2;
  }
  return 0;
}

struct FitArgs {
  std::string data;
  bool header = false;
  bool normalize = false;
  std::string mechanism = "cdp-lap";
  double epsilon = 0.9;
  int iterations = 10;
  double weight_cap = 100.0;
  double failure_prob = dp_irls::kDefaultAdvancedFailureProb;
  uint64_t seed = 0;
  std::string trace_out;
};

int RunFitCommand(const FitArgs& args) {
  absl::StatusOr<dp_irls::RawDataset> raw =
      dp_irls::LoadDatasetCsv(args.data, args.header);
  if (!raw.ok()) return Fail(raw.status());
  absl::StatusOr<dp_irls::Dataset> dataset =
      args.normalize
          ? dp_irls::NormalizeDataset(std::move(raw->features),
                                      std::move(raw->responses))
          : dp_irls::ValidateDataset(std::move(raw->features),
                                     std::move(raw->responses));
  if (!dataset.ok()) return Fail(dataset.status());
  absl::StatusOr<GridMechanism> mechanism =
      dp_irls::ParseGridMechanism(args.mechanism);
  if (!mechanism.ok()) return Fail(mechanism.status());

  ExperimentGrid grid;
  grid.epsilon = args.epsilon;
  grid.iterations = args.iterations;
  grid.weight_cap = args.weight_cap;
  grid.failure_prob = args.failure_prob;

  dp_irls::SeededRng rng(args.seed, /*stream_id=*/1);
  absl::StatusOr<dp_irls::CellOutcome> outcome =
      dp_irls::FitMechanism(grid, *mechanism, *dataset, rng);
  if (!outcome.ok()) return Fail(outcome.status());
  const dp_irls::ParameterVector& theta = outcome->theta;
  std::vector<std::string> fields;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    fields.push_back(dp_irls::FormatDouble(theta[j]));
  }
  std::cout << absl::StrJoin(fields, ",") << "\n";
  if (!args.trace_out.empty()) {
    if (absl::Status s = dp_irls::WriteFile(args.trace_out,
                                            dp_irls::FormatTraceJsonl(outcome->trace));
        !s.ok()) {
      return Fail(s);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Differentially private IRLS for L1 regression: experiment grid, "
      "single fits, and synthetic data export."};
  app.require_subcommand(0, 1);

  ExperimentGrid grid;
  grid.mechanisms.clear();
  std::string n_list = "500,1000,2000,5000,10000";
  std::string mechanism_list =
      "cdp-lap,cdp-gau,dp-conventional,dp-advanced,non-private";
  std::string out_csv, summary_csv, out_svg, split = "holdout";
  bool header = true;
  dp_irls::RunGridOptions grid_options;

  app.add_option("--d", grid.dim, "Feature dimension")->capture_default_str();
  app.add_option("--n", n_list, "Comma-separated list of N values")
      ->capture_default_str();
  app.add_option("--epsilon", grid.epsilon, "Total privacy budget")
      ->capture_default_str();
  app.add_option("--iters", grid.iterations, "IRLS iterations J")
      ->capture_default_str();
  app.add_option("--weight-cap", grid.weight_cap,
                 "Weight cap: s_i = 1 / max(1/cap, |residual|)")
      ->capture_default_str();
  app.add_option("--delta-f", grid.failure_prob,
                 "Failure probability for the Gaussian mechanism and "
                 "advanced composition")
      ->capture_default_str();
  app.add_option("--mechanisms", mechanism_list,
                 "Comma-separated subset of cdp-lap, cdp-gau, "
                 "dp-conventional, dp-advanced, non-private")
      ->capture_default_str();
  app.add_option("--seeds", grid.num_seeds, "Datasets per (mechanism, N)")
      ->capture_default_str();
  app.add_option("--base-seed", grid.base_seed, "Root seed")
      ->capture_default_str();
  app.add_option("--noise-var", grid.noise_var, "Observation noise variance")
      ->capture_default_str();
  app.add_option("--split", split, "Test split: holdout or extra")
      ->check(CLI::IsMember({"holdout", "extra"}))
      ->capture_default_str();
  app.add_option("--out-csv", out_csv, "Per-cell results CSV (stdout if unset)");
  app.add_option("--summary-csv", summary_csv, "Per-(mechanism, N) summary CSV");
  app.add_option("--out-svg", out_svg, "Summary chart");
  app.add_option("--csv-header", header, "Write CSV header rows")
      ->transform(CLI::CheckedTransformer(kOnOff, CLI::ignore_case))
      ->default_str("on");
  app.add_flag("--timing", grid_options.record_timing,
               "Record wall_time_ms (makes output nondeterministic)");
  app.add_option("--threads", grid_options.threads,
                 "Worker threads (0 = hardware; DP_IRLS_THREADS caps)");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "Fit one dataset loaded from CSV");
  fit->add_option("--data", fit_args.data,
                  "CSV with d feature columns then the response")
      ->required();
  fit->add_option("--csv-header", fit_args.header, "Input has a header row")
      ->transform(CLI::CheckedTransformer(kOnOff, CLI::ignore_case))
      ->default_str("off");
  fit->add_flag("--normalize", fit_args.normalize,
                "Rescale to unit max row norm and unit max |y| instead of "
                "rejecting out-of-bound rows");
  fit->add_option("--mechanism", fit_args.mechanism, "Mechanism")
      ->capture_default_str();
  fit->add_option("--epsilon", fit_args.epsilon, "Total privacy budget")
      ->capture_default_str();
  fit->add_option("--iters", fit_args.iterations, "IRLS iterations J")
      ->capture_default_str();
  fit->add_option("--weight-cap", fit_args.weight_cap, "Weight cap")
      ->capture_default_str();
  fit->add_option("--delta-f", fit_args.failure_prob, "Failure probability")
      ->capture_default_str();
  fit->add_option("--seed", fit_args.seed, "Noise seed")->capture_default_str();
  fit->add_option("--trace-out", fit_args.trace_out,
                  "Write the per-iteration trace as JSON lines");

  dp_irls::SyntheticSpec gen_spec;
  std::string gen_train, gen_test;
  bool gen_header = true;
  CLI::App* generate =
      app.add_subcommand("generate", "Export a synthetic train/test split");
  generate->add_option("--n", gen_spec.num_points, "Total N")
      ->capture_default_str();
  generate->add_option("--d", gen_spec.dim, "Dimension")->capture_default_str();
  generate->add_option("--noise-var", gen_spec.noise_var, "Noise variance")
      ->capture_default_str();
  generate->add_option("--seed", gen_spec.seed, "Seed")->capture_default_str();
  generate->add_option("--out-train", gen_train, "Training CSV")->required();
  generate->add_option("--out-test", gen_test, "Test CSV")->required();
  generate->add_option("--csv-header", gen_header, "Write header rows")
      ->transform(CLI::CheckedTransformer(kOnOff, CLI::ignore_case))
      ->default_str("on");

  CLI11_PARSE(app, argc, argv);

  if (fit->parsed()) return RunFitCommand(fit_args);
  if (generate->parsed()) {
    absl::StatusOr<dp_irls::SplitDataset> data =
        dp_irls::GenerateSynthetic(gen_spec);
    if (!data.ok()) return Fail(data.status());
    if (absl::Status s = dp_irls::WriteDatasetCsv(data->train, gen_train,
                                                  gen_header);
        !s.ok()) {
      return Fail(s);
    }
    if (absl::Status s =
            dp_irls::WriteDatasetCsv(data->test, gen_test, gen_header);
        !s.ok()) {
      return Fail(s);
    }
    return 0;
  }

  grid.num_points.clear();
  for (absl::string_view item : absl::StrSplit(n_list, ',', absl::SkipEmpty())) {
    int n = 0;
    if (!absl::SimpleAtoi(item, &n)) {
      return Fail(absl::InvalidArgumentError(
          absl::StrFormat("--n: '%s' is not an integer", item)));
    }
    grid.num_points.push_back(n);
  }
  absl::StatusOr<std::vector<GridMechanism>> mechanisms =
      ParseMechanismList(mechanism_list);
  if (!mechanisms.ok()) return Fail(mechanisms.status());
  grid.mechanisms = *mechanisms;
  grid.split =
      split == "extra" ? dp_irls::TestSplit::kExtra : dp_irls::TestSplit::kHoldout;
  return RunGridCommand(grid, out_csv, summary_csv, out_svg, header,
                        grid_options);
}
