#include "levycop/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "levycop/charfn.hpp"
#include "levycop/copula.hpp"
#include "levycop/inversion.hpp"
#include "levycop/logderiv.hpp"
#include "levycop/quadrature.hpp"
#include "levycop/simulate.hpp"
#include "levycop/spectral.hpp"

namespace levycop {

namespace {

using Outcome = AcceptanceOutcome;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

TailEstimate exact_tail_estimate(const LevyModelSpec& model, double h, int grid_points,
                                 double x_max) {
  const Eigen::VectorXd axis = make_u_axis(h, SpectralConfig{grid_points, x_max});
  const CharFnGrid grid = exact_charfn(model, axis, axis);
  return smoothed_weighted_density(log_derivative_sum(grid, 0.0), h, grid_points);
}

void maybe_emit(const ExperimentResult& result, const AcceptanceOptions& opts,
                const std::string& id, Outcome& out) {
  if (!opts.report_dir) return;
  const auto dir = *opts.report_dir / id;
  emit_report(result, dir);
  out.details.push_back("report written to " + dir.string());
}

Outcome ac1(const AcceptanceOptions&) {
  Outcome out;
  // Integral of K1 over [-1e4, 1e4], unit panels with 16 Gauss nodes.
  std::vector<double> breaks;
  for (int i = 0; i <= 10000; ++i) breaks.push_back(i);
  const quad::Rule rule = quad::composite(breaks, 16);
  double integral = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    integral += 2.0 * rule.weights(i) * kernel_k1(rule.nodes(i));
  const bool mass_ok = std::abs(integral - 1.0) <= 1e-4;

  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double h = 0.02 + 0.98 * unit(rng);
    const Eigen::Vector2d u((2.0 * unit(rng) - 1.0) * 1.2 / h, (2.0 * unit(rng) - 1.0) * 1.2 / h);
    const double hat1 = std::abs(u.x()) * h < 1.0 ? 1.0 - h * std::abs(u.x()) : 0.0;
    const double hat2 = std::abs(u.y()) * h < 1.0 ? 1.0 - h * std::abs(u.y()) : 0.0;
    worst = std::max(worst, std::abs(kernel_fk(u, h) - hat1 * hat2));
  }
  const bool fk_ok = worst <= 1e-12;

  // Fourier transform of K1 by quadrature against the hat (1 - |t|)_+.
  double ft_worst = 0.0;
  for (double t : {0.0, 0.25, 0.5, 0.9, 1.5}) {
    double value = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      value += 2.0 * rule.weights(i) * std::cos(t * rule.nodes(i)) * kernel_k1(rule.nodes(i));
    ft_worst = std::max(ft_worst, std::abs(value - std::max(0.0, 1.0 - std::abs(t))));
  }
  out.details.push_back(fmt("integral of K1 over [-1e4, 1e4] = %.8f (|err| %.2e, tol 1e-4)",
                            integral, std::abs(integral - 1.0)));
  out.details.push_back(fmt("max |FK - hat product| over 1000 points = %.2e (tol 1e-12)", worst));
  out.details.push_back(fmt("max |quadrature F K1 - (1-|t|)_+| at 5 points = %.2e", ft_worst));
  out.passed = mass_ok && fk_ok && ft_worst <= 1e-4;
  out.summary = fmt("int K1 = %.7f, FK max dev %.1e, F K1 quadrature dev %.1e", integral, worst,
                    ft_worst);
  return out;
}

Outcome ac2(const AcceptanceOptions&) {
  Outcome out;
  Eigen::Matrix2d sigma;
  sigma << 1.0, 0.3, 0.3, 0.6;
  const Eigen::VectorXd axis = symmetric_axis(0.25, 24);
  const CharFnGrid gauss = exact_charfn(gaussian_model(sigma), axis, axis);
  const double null1 = fourth_log_derivative(gauss, 1, 0.0).abs().maxCoeff();
  const double null2 = fourth_log_derivative(gauss, 2, 0.0).abs().maxCoeff();
  const double null_norm = std::max(null1, null2);

  double shift = 0.0;
  for (const LevyModelSpec& model :
       {cpp_model(cpp_log_density()), cpp_model(point_masses({{Eigen::Vector2d(1, 1), 1.0}})),
        cpp_model(point_masses({{Eigen::Vector2d(0.4, 1.7), 0.7}, {Eigen::Vector2d(2, 0.5), 1.3}}))}) {
    const CharFnGrid jumps = exact_charfn(model, axis, axis);
    const LogDerivGrid plain = log_derivative_sum(jumps, 0.0);
    const LogDerivGrid mixed = log_derivative_sum(multiply(jumps, gauss), 0.0);
    const double d = (plain.q - mixed.q).abs().maxCoeff();
    shift = std::max(shift, d);
    out.details.push_back(model.label + fmt(": max |Q(cpp x gauss) - Q(cpp)| = %.2e", d));
  }
  out.details.push_back(fmt("Gaussian grid: max |d^4 log phi| = %.2e (tol 1e-10)", null_norm));
  out.passed = null_norm <= 1e-10 && shift <= 1e-9;
  out.summary = fmt("Gaussian null %.1e (tol 1e-10), Brownian shift %.1e (tol 1e-9)", null_norm,
                    shift);
  return out;
}

Outcome ac3(const AcceptanceOptions&) {
  Outcome out;
  const double h = 0.1;
  const LevyModelSpec model = cpp_model(point_masses({{Eigen::Vector2d(1, 1), 1.0}}));
  const TailEstimate te = exact_tail_estimate(model, h, 512, 20.0);
  const Spectrum q = [&](double u1, double u2) {
    const ExponentDerivatives e = exponent_derivatives(model, Eigen::Vector2d(u1, u2));
    return e.d[0][3] + e.d[1][3];
  };
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> coord(std::max(0.1, te.delta_floor()), 0.9);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double a = coord(rng);
    const double b = coord(rng);
    const double grid_value = te.raw(a, b);
    const double direct = tail_integral_plancherel(q, h, a, b);
    const double rel = std::abs(grid_value - direct) / std::abs(direct);
    worst = std::max(worst, rel);
    out.details.push_back(fmt("(a,b)=(%.3f,%.3f): x-space %.8f, u-space %.8f", a, b, grid_value,
                              direct) +
                          fmt(", rel %.2e", rel));
  }
  out.passed = worst <= 1e-3;
  out.summary = fmt("max relative gap %.2e over 20 points (tol 1e-3), fft %.0f, dx %.4f", worst,
                    static_cast<double>(te.fft_size()), te.dx());
  return out;
}

Outcome ac4(const AcceptanceOptions&) {
  Outcome out;
  const JumpDensitySpec spec = beta_family(0.5);
  const LevyModelSpec model = compensated_model(spec);
  const double truth = tail_integral_truth(spec, 1.0, 1.0, 1e-10);
  std::vector<double> x;
  std::vector<double> log_h;
  std::vector<double> y;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    const TailEstimate te = exact_tail_estimate(model, h, 1024, 20.0);
    const double err = std::abs(truth - te.raw(1.0, 1.0));
    x.push_back(std::log(h * std::abs(std::log(h))));
    log_h.push_back(std::log(h));
    y.push_back(std::log(err));
    out.details.push_back(fmt("h=%.2f: |U - N_hat| = %.4e, /h = %.4f, /(h|log h|) = %.4f", h, err,
                              err / h, err / (h * std::abs(std::log(h)))));
  }
  const double slope = least_squares_slope(x, y);
  const double slope_h = least_squares_slope(log_h, y);
  out.details.push_back(fmt("U(1,1) = %.10f", truth));
  out.details.push_back(fmt("slope against log h (diagnostic) = %.3f", slope_h));
  out.passed = std::abs(slope - 1.0) <= 0.3;
  out.summary = fmt("slope on log(h|log h|) = %.3f (window 1 +/- 0.3); slope on log h = %.3f",
                    slope, slope_h);
  return out;
}

Outcome ac5(const AcceptanceOptions& opts) {
  Outcome out;
  ExperimentConfig cfg = experiment_preset("ac5");
  cfg.workers = opts.workers;
  ExperimentResult result = run_experiment(cfg);
  for (const auto& s : result.summary)
    out.details.push_back(fmt("n=%.0f: median %.4f, q25 %.4f, q75 %.4f", static_cast<double>(s.n),
                              s.median, s.q25, s.q75));
  out.details.push_back(fmt("max clipped fraction %.3f, median runtime %.0f ms",
                            result.clipped_fraction_max, result.runtime_median_ms));
  maybe_emit(result, opts, "ac5", out);
  if (result.rate) {
    const RateFit& r = *result.rate;
    out.passed = r.slope >= -0.65 && r.slope <= -0.35;
    out.summary = fmt("slope %.3f, bootstrap CI [%.3f, %.3f] (window [-0.65, -0.35])", r.slope,
                      r.ci_lo, r.ci_hi);
  } else {
    out.summary = "no rate could be fitted";
  }
  out.experiment = std::move(result);
  return out;
}

// f = exp(-x) perturbed by noise of sup-norm gamma on a grid over [delta, X].
Outcome ac6(const AcceptanceOptions&) {
  Outcome out;
  const double za = 0.1;
  const double zb = 0.5;
  const double slope_floor = za / 2.0;  // inf of |f'| on (0, f^{-1}(za / 2)]
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  double worst_ratio = 0.0;
  const Eigen::VectorXd z = ladder(za, zb, 200);
  for (int trial = 0; trial < 1000; ++trial) {
    const double gamma = 0.025 * unit(rng);
    const double delta = 0.001 + 0.499 * unit(rng);
    const double spacing = 0.001 + 0.049 * unit(rng);
    const double top = -std::log(za / 2.0) + 1.0;
    const int kind = trial % 3;
    const double freq = 1.0 + 40.0 * unit(rng);
    const int count = static_cast<int>(std::floor((top - delta) / spacing)) + 1;
    Eigen::VectorXd xs(count);
    Eigen::VectorXd fs(count);
    for (int i = 0; i < count; ++i) {
      xs(i) = delta + i * spacing;
      double noise = 0.0;
      switch (kind) {
        case 0: noise = gamma * (2.0 * unit(rng) - 1.0); break;
        case 1: noise = gamma * std::sin(freq * xs(i)); break;
        default: noise = (i % 2 ? gamma : -gamma); break;
      }
      fs(i) = std::max(0.0, std::exp(-xs(i)) + noise);
    }
    const MonotoneInverse mi = running_infimum(xs, fs, "exp");
    double sup = 0.0;
    for (Eigen::Index k = 0; k < z.size(); ++k)
      sup = std::max(sup, std::abs(pseudo_inverse(mi, z(k)).x + std::log(z(k))));
    const double bound = 2.0 * gamma / slope_floor + spacing;
    worst_ratio = std::max(worst_ratio, sup / bound);
    violations += sup > bound;
  }
  out.passed = violations == 0;
  out.details.push_back(fmt("largest sup error / bound = %.3f", worst_ratio));
  out.summary = fmt("%.0f of 1000 instances violate 2 gamma / inf|f'| + spacing", violations);
  return out;
}

Outcome ac7(const AcceptanceOptions& opts) {
  Outcome out;
  ExperimentConfig cfg = experiment_preset("ac7");
  cfg.workers = opts.workers;
  ExperimentResult result = run_experiment(cfg);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& s : result.summary) {
    const double scaled = std::sqrt(static_cast<double>(s.n)) * s.median;
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    out.details.push_back(fmt("n=%.0f: median d = %.5f, sqrt(n) median = %.4f",
                              static_cast<double>(s.n), s.median, scaled));
  }
  maybe_emit(result, opts, "ac7", out);
  const double ratio = hi / lo;
  out.passed = result.summary.size() == cfg.n_ladder.size() && ratio <= 3.0;
  out.summary = fmt("max/min of sqrt(n) median d = %.3f (tol 3)", ratio);
  out.experiment = std::move(result);
  return out;
}

Outcome ac8(const AcceptanceOptions&) {
  Outcome out;
  const JumpDensitySpec spec = beta_family(0.5);
  const LevyModelSpec model = compensated_model(spec, Eigen::Matrix2d::Identity());
  const LevyModelSpec pure_jump = compensated_model(spec);
  const double delta = 0.1;
  const Eigen::VectorXd u = ladder(0.5, 2.0, 25);
  const TruthTables truth = make_truth_tables(model);
  Eigen::ArrayXXd target(u.size(), u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j)
    for (Eigen::Index i = 0; i < u.size(); ++i) target(i, j) = truth.copula(u(i), u(j));

  bool invariants = true;
  std::map<double, double> error;
  for (double h : {0.4, 0.1}) {
    const Eigen::VectorXd axis = make_u_axis(h);
    const CharFnGrid grid = exact_charfn(model, axis, axis);
    const LogDerivGrid q = log_derivative_sum(grid, 0.0);
    const LogDerivGrid q_plain = log_derivative_sum(exact_charfn(pure_jump, axis, axis), 0.0);
    const double scale = std::max(1.0, q_plain.q.abs().maxCoeff());
    const double brownian = (q.q - q_plain.q).abs().maxCoeff() / scale;
    const TailEstimate te = smoothed_weighted_density(q, h);
    const TailSource source = estimate_source(te, delta);
    const CopulaSurface surface = levy_copula_surface(source, delta, u, u);
    error[h] = (surface.values - target).abs().maxCoeff();

    const bool nonneg = (surface.values >= 0.0).all() && (source.curve1.value.array() >= 0).all() &&
                        (source.curve2.value.array() >= 0).all();
    bool membership = true;
    for (const TailCurve* c : {&source.curve1, &source.curve2}) {
      const MonotoneInverse mi = running_infimum(c->x, c->value);
      double previous = kInfinity;
      for (double zz = 0.05; zz <= 20.0; zz *= 1.1) {
        const double x = pseudo_inverse(mi, zz).x;
        membership = membership && x >= delta && x <= previous;
        previous = x;
      }
    }
    invariants = invariants && brownian <= 1e-9 && nonneg && membership;
    out.details.push_back(fmt("h=%.1f: copula sup error %.4f, Brownian invariance %.1e", h,
                              error[h], brownian) +
                          (nonneg ? ", Re+ ok" : ", NEGATIVE VALUES") +
                          (membership ? ", inverses in D_delta" : ", INVERSE NOT MONOTONE") +
                          fmt(", %.0f flagged cells", surface.flagged_cells()));
  }
  out.passed = error[0.1] < error[0.4] && invariants;
  out.summary = fmt("sup error h=0.1: %.4f vs h=0.4: %.4f (delta = %.2f)", error[0.1], error[0.4],
                    delta) +
                (invariants ? ", invariants hold" : ", invariant violated");
  return out;
}

Outcome ac9(const AcceptanceOptions& opts) {
  Outcome out;
  ExperimentConfig cfg = experiment_preset("ac9");
  cfg.workers = 1;
  const ExperimentResult serial = run_experiment(cfg);
  cfg.workers = opts.workers > 0
                    ? opts.workers
                    : static_cast<int>(std::max(4u, std::thread::hardware_concurrency()));
  const ExperimentResult parallel = run_experiment(cfg);
  const std::string a = canonical_errors(serial.records);
  const std::string b = canonical_errors(parallel.records);
  const bool finite = std::all_of(serial.records.begin(), serial.records.end(),
                                  [](const ErrorRecord& r) { return !r.failed; });
  out.passed = a == b && finite;
  out.details.push_back(fmt("%.0f records, workers 1 vs %.0f",
                            static_cast<double>(serial.records.size()),
                            static_cast<double>(parallel.workers_used)));
  out.summary = std::string(a == b ? "errors.csv identical" : "errors.csv DIFFERS") +
                " under 1 and " + std::to_string(parallel.workers_used) + " workers" +
                (finite ? "" : ", failed replications present");
  return out;
}

const std::map<std::string, std::function<Outcome(const AcceptanceOptions&)>>& registry() {
  static const std::map<std::string, std::function<Outcome(const AcceptanceOptions&)>> table{
      {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4}, {"AC-5", ac5},
      {"AC-6", ac6}, {"AC-7", ac7}, {"AC-8", ac8}, {"AC-9", ac9}};
  return table;
}

}  // namespace

std::vector<std::string> acceptance_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  return ids;
}

AcceptanceOutcome run_acceptance(const std::string& id, const AcceptanceOptions& opts) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw std::invalid_argument("unknown acceptance criterion '" + id + "'");
  const auto start = std::chrono::steady_clock::now();
  AcceptanceOutcome outcome;
  try {
    outcome = it->second(opts);
  } catch (const std::exception& e) {
    outcome.passed = false;
    outcome.summary = std::string("exception: ") + e.what();
  }
  outcome.id = id;
  outcome.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

std::string format_outcome(const AcceptanceOutcome& outcome) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s)", outcome.runtime_s);
  return outcome.id + (outcome.passed ? " PASS  " : " FAIL  ") + outcome.summary + buf;
}

}  // namespace levycop
