#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levycop/levy_model.hpp"
#include "levycop/simulate.hpp"
#include "levycop/spectral.hpp"

namespace levycop {

enum class Metric {
  eta_weighted_tail_sup,  //!< sup over (a, b) of eta(a, b) |U - N_hat|
  copula_sup,             //!< sup over the (u, v) ladder of |C - C_hat|
  charfn_distance,        //!< grid d^(4)(phi_hat, phi) on the evaluation u-square
};

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

struct ExperimentConfig {
  std::string name = "experiment";
  LevyModelSpec model;
  std::vector<long> n_ladder;
  int replications = 1;
  std::uint64_t master_seed = 1;
  Regime regime = Regime::cpp;
  double h_mult = 1.0;
  int grid_points = 1024;
  double x_max = 20.0;
  double floor_mult = 1.0;
  double delta_mult = 1.0;
  //! Evaluation range: the (u, v) ladder for copula_sup, the log-spaced (a, b)
  //! grid for eta_weighted_tail_sup, [-eval_hi, eval_hi]^2 for charfn_distance.
  double eval_lo = 0.2;
  double eval_hi = 0.8;
  int eval_points = 25;
  Metric metric = Metric::copula_sup;
  double epsilon = kDefaultSmallJumpCutoff;
  int bootstrap = 1000;
  //! 0 selects std::thread::hardware_concurrency().
  int workers = 0;
};

//! Throws std::invalid_argument when the config violates its invariants.
void validate(const ExperimentConfig& cfg);

struct ErrorRecord {
  long n = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  double error = 0.0;
  double clipped_fraction = 0.0;
  double runtime_ms = 0.0;
  int flagged_cells = 0;
  bool failed = false;
  std::string message;
};

struct SummaryRow {
  long n = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  int failures = 0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  //! Canonically ordered by (n, rep).
  std::vector<ErrorRecord> records;
  std::vector<SummaryRow> summary;
  std::optional<RateFit> rate;
  std::vector<std::string> warnings;
  double runtime_median_ms = 0.0;
  double runtime_max_ms = 0.0;
  double clipped_fraction_max = 0.0;
  int workers_used = 1;
};

//! Simulates, estimates and scores every (n, rep) pair. Replication k of
//! n_ladder[i] uses the stream of index i * replications + k, so results do
//! not depend on `workers`. Failed replications are recorded, not thrown.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

//! Least squares of log(median) on log(n), no interval.
RateFit rate_regression(const std::vector<long>& n, const std::vector<double>& medians);

//! Same fit with a percentile bootstrap interval (95%) from resampling the
//! replications within each n. samples[i] holds the errors at n[i].
RateFit rate_regression(const std::vector<long>& n,
                        const std::vector<std::vector<double>>& samples, int bootstrap,
                        std::uint64_t seed);

//! Per-n medians and quartiles of the finite errors.
std::vector<SummaryRow> summarize(const std::vector<ErrorRecord>& records);

//! Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> values, double p);

//! errors.csv, summary.csv, rates.csv, plotdata/*.csv and manifest.txt.
void emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir);

//! Rebuilds summary and rate from an existing errors.csv and rewrites the
//! derived files in place.
ExperimentResult rerender_report(const std::filesystem::path& dir);

std::vector<ErrorRecord> read_errors_csv(const std::filesystem::path& path);

//! errors.csv body without the runtime column, for schedule comparisons.
std::string canonical_errors(const std::vector<ErrorRecord>& records);

//! Named experiment configurations: ac5 (CPP copula rate), ac7 (empirical
//! characteristic function), ac9 (determinism), smoke.
std::vector<std::string> experiment_preset_names();
ExperimentConfig experiment_preset(const std::string& name);

}  // namespace levycop
