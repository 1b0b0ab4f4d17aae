#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levycop/acceptance.hpp"
#include "levycop/copula.hpp"
#include "levycop/harness.hpp"
#include "levycop/io.hpp"
#include "levycop/logderiv.hpp"
#include "levycop/simulate.hpp"
#include "levycop/spectral.hpp"

namespace fs = std::filesystem;
using namespace levycop;

namespace {

struct PipelineFlags {
  std::string regime = "cpp";
  double h_mult = 1.0;
  int grid = 1024;
  double x_max = 20.0;
  double floor_mult = 1.0;
  double delta_mult = 1.0;
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& f) {
  app->add_option("--regime", f.regime, "Bandwidth regime: cpp or general")
      ->check(CLI::IsMember({"cpp", "general", "levy"}));
  app->add_option("--h-mult", f.h_mult, "Bandwidth multiplier")->check(CLI::PositiveNumber);
  app->add_option("--grid", f.grid, "Minimum FFT length per axis")->check(CLI::Range(16, 1 << 14));
  app->add_option("--x-max", f.x_max, "Half width of the x-grid")->check(CLI::PositiveNumber);
  app->add_option("--floor-mult", f.floor_mult, "Multiplier c of the floor c/sqrt(n)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--delta-mult", f.delta_mult, "Multiplier of the inversion offset")
      ->check(CLI::PositiveNumber);
}

std::ofstream open_file(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void print_summary(const ExperimentResult& result) {
  for (const auto& s : result.summary)
    std::printf("n=%ld median=%.6g q25=%.6g q75=%.6g failures=%d\n", s.n, s.median, s.q25, s.q75,
                s.failures);
  if (result.rate)
    std::printf("slope=%.4f ci=[%.4f, %.4f]\n", result.rate->slope, result.rate->ci_lo,
                result.rate->ci_hi);
  for (const auto& w : result.warnings) std::printf("warning: %s\n", w.c_str());
}

std::optional<std::string> acceptance_id(const std::string& preset) {
  for (const auto& id : acceptance_ids()) {
    std::string lower = "ac" + id.substr(3);
    if (preset == id || preset == lower) return id;
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy copula estimation from low-frequency observations"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Emit a panel of increments as CSV");
  std::string sim_model;
  long sim_n = 0;
  std::uint64_t sim_seed = 1;
  double sim_epsilon = kDefaultSmallJumpCutoff;
  std::string sim_out;
  sim->add_option("--model", sim_model, "Model name or JSON file")->required();
  sim->add_option("--n", sim_n, "Number of increments")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Seed");
  sim->add_option("--epsilon", sim_epsilon, "Small-jump cutoff")->check(CLI::PositiveNumber);
  sim->add_option("--out", sim_out, "Output file (default stdout)");

  // truth
  auto* truth = app.add_subcommand("truth", "Emit tail-integral truth tables as CSV");
  std::string truth_model;
  double truth_lo = 0.1;
  double truth_hi = 5.0;
  int truth_points = 15;
  std::string truth_out;
  truth->add_option("--model", truth_model, "Model name or JSON file")->required();
  truth->add_option("--lo", truth_lo, "Smallest abscissa")->check(CLI::PositiveNumber);
  truth->add_option("--hi", truth_hi, "Largest abscissa")->check(CLI::PositiveNumber);
  truth->add_option("--points", truth_points, "Log-spaced points per axis")->check(CLI::PositiveNumber);
  truth->add_option("--out", truth_out, "Output file (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate tail integral and copula from a panel");
  std::string est_panel;
  std::string est_model;
  double est_lambda = 0.0;
  std::string est_out;
  PipelineFlags est_flags;
  est->add_option("--panel", est_panel, "Panel CSV from 'simulate'")->required()->check(CLI::ExistingFile);
  est->add_option("--model", est_model, "Model name or JSON file (supplies the intensity)");
  est->add_option("--lambda", est_lambda, "Known jump intensity for the cpp copula");
  est->add_option("--out", est_out, "Output directory")->required();
  add_pipeline_flags(est, est_flags);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a preset or config file and write a report");
  std::string exp_preset;
  std::string exp_config;
  std::string exp_model;
  std::vector<long> exp_n;
  std::optional<std::uint64_t> exp_seed;
  std::optional<int> exp_reps;
  std::optional<std::string> exp_regime;
  std::optional<double> exp_h_mult;
  std::optional<int> exp_grid;
  std::optional<double> exp_floor_mult;
  std::optional<double> exp_delta_mult;
  int exp_workers = 0;
  std::string exp_out;
  std::string preset_help = "Preset: AC-1 ... AC-9 or";
  for (const auto& name : experiment_preset_names()) preset_help += " " + name;
  exp->add_option("--preset", exp_preset, preset_help);
  exp->add_option("--config", exp_config, "JSON experiment config")->check(CLI::ExistingFile);
  exp->add_option("--model", exp_model, "Model name or JSON file");
  exp->add_option("--n", exp_n, "Sample-size ladder");
  exp->add_option("--seed", exp_seed, "Master seed");
  exp->add_option("--reps", exp_reps, "Replications per n");
  exp->add_option("--regime", exp_regime, "Bandwidth regime");
  exp->add_option("--h-mult", exp_h_mult, "Bandwidth multiplier");
  exp->add_option("--grid", exp_grid, "Minimum FFT length per axis");
  exp->add_option("--floor-mult", exp_floor_mult, "Floor multiplier");
  exp->add_option("--delta-mult", exp_delta_mult, "Inversion offset multiplier");
  exp->add_option("--workers", exp_workers, "Worker threads (0: all cores)");
  exp->add_option("--out", exp_out, "Report directory")->required();

  // report
  auto* rep = app.add_subcommand("report", "Re-render summary, rates and plot data from errors.csv");
  std::string rep_dir;
  rep->add_option("--out", rep_dir, "Report directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const LevyModelSpec model = load_model(sim_model);
      const IncrementPanel panel =
          sample_increments(model, sim_n, sim_seed, SimulationOptions{.epsilon = sim_epsilon});
      if (sim_out.empty()) {
        write_panel_csv(std::cout, panel);
      } else {
        auto out = open_file(sim_out);
        write_panel_csv(out, panel);
      }
    } else if (*truth) {
      const LevyModelSpec model = load_model(truth_model);
      Eigen::VectorXd a = ladder(std::log(truth_lo), std::log(truth_hi), truth_points);
      a = a.array().exp().matrix();
      if (truth_out.empty()) {
        write_truth_csv(std::cout, model, a, a);
      } else {
        auto out = open_file(truth_out);
        write_truth_csv(out, model, a, a);
      }
    } else if (*est) {
      std::ifstream in(est_panel);
      const IncrementPanel panel = read_panel_csv(in);
      const Regime regime = regime_from_string(est_flags.regime);
      double lambda = est_lambda;
      if (!est_model.empty() && lambda <= 0.0) lambda = total_mass(load_model(est_model).jumps);
      const double h = bandwidth(panel.n, regime, est_flags.h_mult);
      const Eigen::VectorXd axis = make_u_axis(h, SpectralConfig{est_flags.grid, est_flags.x_max});
      const CharFnGrid ecf = ecf_grid(panel, axis, axis);
      const LogDerivGrid q = log_derivative_sum(ecf, default_floor(panel.n, est_flags.floor_mult));
      const TailEstimate te = smoothed_weighted_density(q, h, est_flags.grid);
      fs::create_directories(est_out);
      Eigen::VectorXd ab = ladder(std::log(std::max(0.1, te.delta_floor())), std::log(5.0), 15);
      ab = ab.array().exp().matrix();
      {
        auto out = open_file(fs::path(est_out) / "tail.csv");
        write_tail_csv(out, te, ab, ab);
      }
      CopulaSurface surface;
      if (regime == Regime::cpp) {
        if (!(lambda > 0) || !std::isfinite(lambda))
          throw std::invalid_argument("cpp copula needs --lambda or a --model with finite intensity");
        const Eigen::VectorXd u = ladder(0.2, 0.8, 25);
        surface = cpp_copula_estimate(te, lambda, panel.n, u, u, est_flags.delta_mult);
      } else {
        const Eigen::VectorXd u = ladder(0.5, 2.0, 25);
        surface = levy_copula_estimate(te, panel.n, u, u, est_flags.delta_mult);
      }
      surface.seed = panel.seed;
      surface.model_label = panel.model_label;
      auto out = open_file(fs::path(est_out) / "copula.csv");
      write_surface_csv(out, surface);
      std::printf("n=%ld h=%.6g dx=%.6g delta_n=%.6g min|phi|=%.3g clipped=%.4f flagged=%d\n",
                  panel.n, h, te.dx(), surface.delta_n, q.min_modulus, q.clipped_fraction,
                  surface.flagged_cells());
    } else if (*exp) {
      if (!exp_preset.empty()) {
        if (const auto id = acceptance_id(exp_preset)) {
          AcceptanceOptions opts;
          opts.workers = exp_workers;
          opts.report_dir = exp_out;
          const AcceptanceOutcome outcome = run_acceptance(*id, opts);
          fs::create_directories(exp_out);
          auto out = open_file(fs::path(exp_out) / (*id + ".txt"));
          out << format_outcome(outcome) << '\n';
          for (const auto& line : outcome.details) out << "  " << line << '\n';
          std::printf("%s\n", format_outcome(outcome).c_str());
          return outcome.passed ? 0 : 1;
        }
      }
      ExperimentConfig cfg = !exp_config.empty()  ? load_experiment(exp_config)
                             : !exp_preset.empty() ? experiment_preset(exp_preset)
                                                   : ExperimentConfig{};
      if (!exp_model.empty()) cfg.model = load_model(exp_model);
      if (!exp_n.empty()) cfg.n_ladder = exp_n;
      if (exp_seed) cfg.master_seed = *exp_seed;
      if (exp_reps) cfg.replications = *exp_reps;
      if (exp_regime) cfg.regime = regime_from_string(*exp_regime);
      if (exp_h_mult) cfg.h_mult = *exp_h_mult;
      if (exp_grid) cfg.grid_points = *exp_grid;
      if (exp_floor_mult) cfg.floor_mult = *exp_floor_mult;
      if (exp_delta_mult) cfg.delta_mult = *exp_delta_mult;
      cfg.workers = exp_workers;
      const ExperimentResult result = run_experiment(cfg);
      emit_report(result, exp_out);
      print_summary(result);
    } else if (*rep) {
      print_summary(rerender_report(rep_dir));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
