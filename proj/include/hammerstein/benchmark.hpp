#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hammerstein/tensor_ops.hpp"
#include "json.hpp"

namespace hammerstein {

struct ExperimentConfig {
  int runs = 20;
  std::vector<double> snr{10.0, 20.0, 50.0, 100.0};
  int N = 1000;
  int n = 30;
  int p = 5;
  std::uint64_t seed = 1;
  std::vector<std::string> estimators{"kop", "lsop"};
  std::filesystem::path out = "bench_out";
  int workers = 1;
  int restarts = 1;
  bool timings = false;  // adds a wall-time column to runs.csv
};

/// Throws InvalidArgument on non-positive counts, SNRs or unknown estimators.
void validate(const ExperimentConfig& config);

/// 200 runs per SNR over the full {10, 20, 50, 100} grid.
ExperimentConfig paper_scale(ExperimentConfig config);

/// Overlay the keys present in `j` onto `base`.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

struct EstimatorOutcome {
  std::string estimator;
  std::string status = "ok";  // "ok" or an error code
  std::string message;
  double fit_g = 0.0;
  double fit_f = 0.0;
  double rank_ratio = 0.0;
  double nll = 0.0;
  int iterations = 0;
  bool converged = true;
  double seconds = 0.0;
  Vector g_hat;
  Vector c_hat;

  bool ok() const { return status == "ok"; }
};

struct RunResult {
  int snr_index = 0;
  double snr = 0.0;
  int run = 0;
  double sigma2 = 0.0;
  double tail_energy = 0.0;
  Vector g_true;
  Vector c_true;
  std::vector<EstimatorOutcome> outcomes;  // one per configured estimator, in config order
};

/// One Monte Carlo run. Depends only on (config, snr_index, run).
RunResult run_single(const ExperimentConfig& config, int snr_index, int run);

/// All runs, sorted by (snr index, run). workers == 1 takes the serial
/// reference loop; larger counts distribute runs over OpenMP threads.
std::vector<RunResult> run_all(const ExperimentConfig& config);

struct SummaryRow {
  double snr = 0.0;
  std::string estimator;
  int ok = 0;
  int failed = 0;
  double fit_g_q1 = 0.0, fit_g_median = 0.0, fit_g_q3 = 0.0;
  double fit_f_q1 = 0.0, fit_f_median = 0.0, fit_f_q3 = 0.0;
};

/// Linearly interpolated quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<RunResult>& results);

std::string runs_csv(const ExperimentConfig& config, const std::vector<RunResult>& results);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string runs_jsonl(const std::vector<RunResult>& results);

struct BoxStats {
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;
  std::vector<double> outliers;
};

/// Quartiles with whiskers at the most extreme data within 1.5 IQR.
BoxStats box_stats(const std::vector<double>& values);

/// Box plot grouped by SNR with one box per estimator. `metric` is "fit_g"
/// or "fit_f".
std::string boxplot_svg(const ExperimentConfig& config, const std::vector<RunResult>& results,
                        const std::string& metric);

struct BenchmarkOutcome {
  std::vector<RunResult> results;
  std::vector<SummaryRow> summary;
  int failures = 0;
};

/// Run everything and write runs.csv, runs.jsonl, summary.csv, boxplot_g.svg
/// and boxplot_f.svg into config.out.
BenchmarkOutcome run_benchmark(const ExperimentConfig& config);

}  // namespace hammerstein
