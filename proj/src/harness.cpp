#include "levycop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Core>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/version.hpp>

#include "levycop/charfn.hpp"
#include "levycop/copula.hpp"
#include "levycop/logderiv.hpp"

namespace levycop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Eigen::VectorXd log_ladder(double lo, double hi, int count) {
  Eigen::VectorXd out = ladder(std::log(lo), std::log(hi), count);
  return out.array().exp().matrix();
}

bool is_cpp_model(const LevyModelSpec& model) { return uses_cpp_copula(model); }

// Everything a replication needs that does not depend on the sample.
struct Shared {
  const ExperimentConfig& cfg;
  IncrementSampler sampler;
  bool cpp_copula = false;
  double intensity = 0.0;
  Eigen::VectorXd eval_u;
  Eigen::ArrayXXd truth;
  CharFnGrid exact;

  explicit Shared(const ExperimentConfig& c)
      : cfg(c), sampler(c.model, SimulationOptions{.epsilon = c.epsilon}) {
    switch (cfg.metric) {
      case Metric::copula_sup: {
        cpp_copula = is_cpp_model(cfg.model);
        if (cpp_copula) intensity = total_mass(cfg.model.jumps);
        eval_u = ladder(cfg.eval_lo, cfg.eval_hi, cfg.eval_points);
        const TruthTables tables = make_truth_tables(cfg.model);
        truth.resize(eval_u.size(), eval_u.size());
        for (Eigen::Index j = 0; j < eval_u.size(); ++j)
          for (Eigen::Index i = 0; i < eval_u.size(); ++i)
            truth(i, j) = tables.copula(eval_u(i), eval_u(j));
        break;
      }
      case Metric::eta_weighted_tail_sup: {
        eval_u = log_ladder(cfg.eval_lo, cfg.eval_hi, cfg.eval_points);
        truth.resize(eval_u.size(), eval_u.size());
        for (Eigen::Index j = 0; j < eval_u.size(); ++j)
          for (Eigen::Index i = 0; i < eval_u.size(); ++i)
            truth(i, j) = tail_integral_truth(cfg.model.jumps, eval_u(i), eval_u(j));
        break;
      }
      case Metric::charfn_distance: {
        const int half = std::max(1, cfg.eval_points / 2);
        eval_u = symmetric_axis(cfg.eval_hi / half, half);
        exact = exact_charfn(cfg.model, eval_u, eval_u);
        break;
      }
    }
  }
};

ErrorRecord run_replication(const Shared& shared, long n, int rep, std::uint64_t seed) {
  const ExperimentConfig& cfg = shared.cfg;
  ErrorRecord record;
  record.n = n;
  record.rep = rep;
  record.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const IncrementPanel panel = shared.sampler.sample(n, seed);
    if (cfg.metric == Metric::charfn_distance) {
      const CharFnGrid ecf = ecf_grid(panel, shared.eval_u, shared.eval_u);
      record.error = weighted_sup_distance(ecf, shared.exact);
    } else {
      const double h = bandwidth(n, cfg.regime, cfg.h_mult);
      const Eigen::VectorXd axis = make_u_axis(h, SpectralConfig{cfg.grid_points, cfg.x_max});
      const CharFnGrid ecf = ecf_grid(panel, axis, axis);
      const LogDerivGrid q = log_derivative_sum(ecf, default_floor(n, cfg.floor_mult));
      const TailEstimate te = smoothed_weighted_density(q, h, cfg.grid_points);
      record.clipped_fraction = te.conditioning().clipped_fraction;
      if (cfg.metric == Metric::copula_sup) {
        const CopulaSurface surface =
            shared.cpp_copula
                ? cpp_copula_estimate(te, shared.intensity, n, shared.eval_u, shared.eval_u,
                                      cfg.delta_mult)
                : levy_copula_estimate(te, n, shared.eval_u, shared.eval_u, cfg.delta_mult);
        record.error = (surface.values - shared.truth).abs().maxCoeff();
        record.flagged_cells = surface.flagged_cells();
      } else {
        double worst = 0.0;
        const double floor = te.delta_floor();
        for (Eigen::Index j = 0; j < shared.eval_u.size(); ++j)
          for (Eigen::Index i = 0; i < shared.eval_u.size(); ++i) {
            const double a = shared.eval_u(i);
            const double b = shared.eval_u(j);
            if (std::max(a, b) < floor) continue;
            worst = std::max(worst, eta(a, b) * std::abs(shared.truth(i, j) -
                                                         tail_integral_estimate(te, a, b)));
          }
        record.error = worst;
      }
    }
    if (!std::isfinite(record.error)) throw std::runtime_error("non-finite error");
  } catch (const std::exception& e) {
    record.failed = true;
    record.error = kNaN;
    record.message = e.what();
  }
  record.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::vector<std::vector<double>> finite_samples(const std::vector<ErrorRecord>& records,
                                                std::vector<long>& ns) {
  std::map<long, std::vector<double>> by_n;
  for (const auto& r : records) {
    auto& bucket = by_n[r.n];
    if (!r.failed && std::isfinite(r.error)) bucket.push_back(r.error);
  }
  std::vector<std::vector<double>> samples;
  ns.clear();
  for (auto& [n, values] : by_n) {
    if (values.empty()) continue;
    ns.push_back(n);
    samples.push_back(std::move(values));
  }
  return samples;
}

double median_of(std::vector<double> v) { return quantile(std::move(v), 0.5); }

std::optional<RateFit> fit_rate(const std::vector<ErrorRecord>& records, int bootstrap,
                                std::uint64_t seed, std::vector<std::string>& warnings) {
  std::vector<long> ns;
  const auto samples = finite_samples(records, ns);
  if (ns.size() < 3) return std::nullopt;
  try {
    return rate_regression(ns, samples, bootstrap, seed);
  } catch (const std::exception& e) {
    warnings.push_back(std::string("rate regression skipped: ") + e.what());
    return std::nullopt;
  }
}

void finalize(ExperimentResult& result) {
  result.summary = summarize(result.records);
  std::vector<double> runtimes;
  for (const auto& r : result.records) {
    runtimes.push_back(r.runtime_ms);
    result.clipped_fraction_max = std::max(result.clipped_fraction_max, r.clipped_fraction);
  }
  if (!runtimes.empty()) {
    result.runtime_median_ms = median_of(runtimes);
    result.runtime_max_ms = *std::max_element(runtimes.begin(), runtimes.end());
  }
  result.rate = fit_rate(result.records, result.config.bootstrap,
                         replication_seed(result.config.master_seed, ~std::uint64_t{0}),
                         result.warnings);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_derived(const ExperimentResult& result, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir / "summary.csv");
    out << "n,median,q25,q75\n";
    for (const auto& s : result.summary)
      out << s.n << ',' << format_double(s.median) << ',' << format_double(s.q25) << ','
          << format_double(s.q75) << '\n';
  }
  {
    auto out = open_output(dir / "rates.csv");
    out << "slope,ci_lo,ci_hi\n";
    if (result.rate)
      out << format_double(result.rate->slope) << ',' << format_double(result.rate->ci_lo) << ','
          << format_double(result.rate->ci_hi) << '\n';
  }
  const auto plot = dir / "plotdata";
  std::filesystem::create_directories(plot);
  {
    auto out = open_output(plot / "median_error.csv");
    out << "log_n,log_median,log_q25,log_q75,log_fit\n";
    for (const auto& s : result.summary) {
      const double ln = std::log(static_cast<double>(s.n));
      const double fit = result.rate ? result.rate->intercept + result.rate->slope * ln : kNaN;
      out << format_double(ln) << ',' << format_double(std::log(s.median)) << ','
          << format_double(std::log(s.q25)) << ',' << format_double(std::log(s.q75)) << ','
          << format_double(fit) << '\n';
    }
  }
  {
    auto out = open_output(plot / "replications.csv");
    out << "log_n,log_error\n";
    for (const auto& r : result.records)
      if (!r.failed && r.error > 0)
        out << format_double(std::log(static_cast<double>(r.n))) << ','
            << format_double(std::log(r.error)) << '\n';
  }
}

std::string model_description(const LevyModelSpec& model) {
  std::ostringstream s;
  s << to_string(model.jumps.kind);
  if (model.jumps.kind == DensityKind::beta_family) s << "(beta=" << model.jumps.beta << ")";
  s << ", " << (model.representation == Representation::compensated ? "compensated" : "cpp");
  s << ", sigma=[" << model.sigma(0, 0) << ' ' << model.sigma(0, 1) << "; " << model.sigma(1, 0)
    << ' ' << model.sigma(1, 1) << "]";
  s << ", alpha=[" << model.alpha(0) << ' ' << model.alpha(1) << "]";
  for (const auto& atom : model.jumps.atoms)
    s << ", atom (" << atom.location.x() << ',' << atom.location.y() << ")x" << atom.weight;
  return s.str();
}

}  // namespace

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::eta_weighted_tail_sup: return "eta_weighted_tail_sup";
    case Metric::copula_sup: return "copula_sup";
    case Metric::charfn_distance: return "charfn_distance";
  }
  return "unknown";
}

Metric metric_from_string(const std::string& name) {
  for (auto m : {Metric::eta_weighted_tail_sup, Metric::copula_sup, Metric::charfn_distance})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

void validate(const ExperimentConfig& cfg) {
  validate(cfg.model);
  if (cfg.n_ladder.empty()) throw std::invalid_argument("experiment: n_ladder is empty");
  for (std::size_t i = 0; i < cfg.n_ladder.size(); ++i) {
    if (cfg.n_ladder[i] < 16) throw std::invalid_argument("experiment: n must be at least 16");
    if (i > 0 && cfg.n_ladder[i] <= cfg.n_ladder[i - 1])
      throw std::invalid_argument("experiment: n_ladder must be increasing");
  }
  if (cfg.replications < 1) throw std::invalid_argument("experiment: replications must be >= 1");
  if (!(cfg.h_mult > 0) || !(cfg.floor_mult >= 0) || !(cfg.delta_mult > 0))
    throw std::invalid_argument("experiment: multipliers must be positive");
  if (cfg.grid_points < 16) throw std::invalid_argument("experiment: grid_points too small");
  if (!(cfg.x_max > 0)) throw std::invalid_argument("experiment: x_max must be positive");
  if (!(cfg.eval_hi > cfg.eval_lo) && cfg.eval_points > 1)
    throw std::invalid_argument("experiment: empty evaluation range");
  if (cfg.eval_points < 1) throw std::invalid_argument("experiment: eval_points must be >= 1");
  if (cfg.metric == Metric::eta_weighted_tail_sup && !(cfg.eval_lo > 0))
    throw std::invalid_argument("experiment: tail metric needs eval_lo > 0");
  if (cfg.metric == Metric::copula_sup && is_cpp_model(cfg.model) &&
      !(cfg.eval_lo > 0 && cfg.eval_hi < 1))
    throw std::invalid_argument("experiment: cpp copula ladder must lie in (0, 1)");
  if (cfg.bootstrap < 0) throw std::invalid_argument("experiment: bootstrap must be >= 0");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result;
  result.config = cfg;
  const bool cpp = is_cpp_model(cfg.model);
  if (cfg.metric != Metric::charfn_distance) {
    if (cpp && cfg.regime == Regime::general)
      result.warnings.push_back("regime mismatch: compound Poisson model with general bandwidth");
    if (!cpp && cfg.regime == Regime::cpp)
      result.warnings.push_back("regime mismatch: infinite-activity model with cpp bandwidth");
  }

  const Shared shared(cfg);
  const std::size_t total = cfg.n_ladder.size() * static_cast<std::size_t>(cfg.replications);
  result.records.resize(total);
  int workers = cfg.workers > 0 ? cfg.workers
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), total));
  result.workers_used = workers;

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t i = job / static_cast<std::size_t>(cfg.replications);
      const int rep = static_cast<int>(job % static_cast<std::size_t>(cfg.replications));
      result.records[job] = run_replication(shared, cfg.n_ladder[i], rep,
                                            replication_seed(cfg.master_seed, job));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  finalize(result);
  return result;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<ErrorRecord>& records) {
  std::map<long, std::pair<std::vector<double>, int>> by_n;
  for (const auto& r : records) {
    auto& [values, failures] = by_n[r.n];
    if (r.failed || !std::isfinite(r.error))
      ++failures;
    else
      values.push_back(r.error);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [n, entry] : by_n) {
    const auto& [values, failures] = entry;
    rows.push_back({n, quantile(values, 0.5), quantile(values, 0.25), quantile(values, 0.75),
                    failures});
  }
  return rows;
}

RateFit rate_regression(const std::vector<long>& n, const std::vector<double>& medians) {
  if (n.size() != medians.size()) throw std::invalid_argument("rate_regression: size mismatch");
  if (n.size() < 3) throw std::invalid_argument("rate_regression: need at least 3 points");
  Eigen::VectorXd x(n.size());
  Eigen::VectorXd y(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(medians[i] > 0) || !std::isfinite(medians[i]))
      throw std::domain_error("rate_regression: errors must be positive and finite");
    if (n[i] <= 0) throw std::invalid_argument("rate_regression: n must be positive");
    x(static_cast<Eigen::Index>(i)) = std::log(static_cast<double>(n[i]));
    y(static_cast<Eigen::Index>(i)) = std::log(medians[i]);
  }
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  if (!(sxx > 0)) throw std::invalid_argument("rate_regression: n values must differ");
  const double slope = ((x.array() - mx) * (y.array() - my)).sum() / sxx;
  RateFit fit;
  fit.slope = slope;
  fit.intercept = my - slope * mx;
  fit.ci_lo = fit.ci_hi = slope;
  return fit;
}

RateFit rate_regression(const std::vector<long>& n,
                        const std::vector<std::vector<double>>& samples, int bootstrap,
                        std::uint64_t seed) {
  if (n.size() != samples.size()) throw std::invalid_argument("rate_regression: size mismatch");
  std::vector<double> medians;
  for (const auto& s : samples) {
    if (s.empty()) throw std::invalid_argument("rate_regression: empty sample");
    medians.push_back(median_of(s));
  }
  RateFit fit = rate_regression(n, medians);
  if (bootstrap <= 0) return fit;
  boost::random::mt19937_64 rng(seed);
  std::vector<double> slopes;
  slopes.reserve(static_cast<std::size_t>(bootstrap));
  std::vector<double> resampled;
  std::vector<double> boot_medians(samples.size());
  for (int b = 0; b < bootstrap; ++b) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      boost::random::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
      resampled.resize(s.size());
      for (auto& v : resampled) v = s[pick(rng)];
      boot_medians[i] = median_of(resampled);
    }
    try {
      slopes.push_back(rate_regression(n, boot_medians).slope);
    } catch (const std::domain_error&) {
      // A resample with a zero median has no log; it carries no slope.
    }
  }
  if (!slopes.empty()) {
    fit.ci_lo = quantile(slopes, 0.025);
    fit.ci_hi = quantile(slopes, 0.975);
  }
  return fit;
}

void emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "errors.csv");
    out << "n,rep,error,clipped_fraction,runtime_ms\n";
    for (const auto& r : result.records)
      out << r.n << ',' << r.rep << ',' << format_double(r.error) << ','
          << format_double(r.clipped_fraction) << ',' << format_double(r.runtime_ms) << '\n';
  }
  write_derived(result, out_dir);

  const ExperimentConfig& cfg = result.config;
  auto out = open_output(out_dir / "manifest.txt");
  out << "name: " << cfg.name << '\n';
  out << "model: " << model_description(cfg.model) << '\n';
  out << "model_label: " << cfg.model.label << '\n';
  out << "n_ladder:";
  for (long n : cfg.n_ladder) out << ' ' << n;
  out << '\n';
  out << "replications: " << cfg.replications << '\n';
  out << "master_seed: " << cfg.master_seed << '\n';
  out << "regime: " << to_string(cfg.regime) << '\n';
  out << "h_mult: " << cfg.h_mult << '\n';
  out << "grid_points: " << cfg.grid_points << '\n';
  out << "x_max: " << cfg.x_max << '\n';
  out << "floor_mult: " << cfg.floor_mult << '\n';
  out << "delta_mult: " << cfg.delta_mult << '\n';
  out << "eval: [" << cfg.eval_lo << ", " << cfg.eval_hi << "] x " << cfg.eval_points << '\n';
  out << "metric: " << to_string(cfg.metric) << '\n';
  out << "epsilon: " << cfg.epsilon << '\n';
  out << "bootstrap: " << cfg.bootstrap << '\n';
  out << "workers: " << result.workers_used << '\n';
  out << "runtime_median_ms: " << result.runtime_median_ms << '\n';
  out << "runtime_max_ms: " << result.runtime_max_ms << '\n';
  out << "clipped_fraction_max: " << result.clipped_fraction_max << '\n';
  for (const auto& r : result.records)
    if (r.failed) out << "failed: n=" << r.n << " rep=" << r.rep << " " << r.message << '\n';
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  out << "eigen: " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
      << EIGEN_MINOR_VERSION << '\n';
  out << "boost: " << BOOST_VERSION / 100000 << '.' << BOOST_VERSION / 100 % 1000 << '.'
      << BOOST_VERSION % 100 << '\n';
  out << "compiler: " << __VERSION__ << '\n';
  out << "cxx_standard: " << __cplusplus << '\n';
}

std::vector<ErrorRecord> read_errors_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,rep,error", 0) != 0)
    throw std::runtime_error(path.string() + ": missing errors.csv header");
  std::vector<ErrorRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    ErrorRecord r;
    r.n = std::stol(fields[0]);
    r.rep = std::stoi(fields[1]);
    r.error = std::stod(fields[2]);
    r.clipped_fraction = std::stod(fields[3]);
    r.runtime_ms = std::stod(fields[4]);
    r.failed = !std::isfinite(r.error);
    records.push_back(r);
  }
  return records;
}

ExperimentResult rerender_report(const std::filesystem::path& dir) {
  ExperimentResult result;
  result.records = read_errors_csv(dir / "errors.csv");
  std::ifstream manifest(dir / "manifest.txt");
  std::string line;
  while (manifest && std::getline(manifest, line)) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 2);
    if (key == "master_seed") result.config.master_seed = std::stoull(value);
    if (key == "bootstrap") result.config.bootstrap = std::stoi(value);
    if (key == "name") result.config.name = value;
  }
  finalize(result);
  write_derived(result, dir);
  return result;
}

std::string canonical_errors(const std::vector<ErrorRecord>& records) {
  std::vector<const ErrorRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const ErrorRecord* a, const ErrorRecord* b) {
    return a->n != b->n ? a->n < b->n : a->rep < b->rep;
  });
  std::ostringstream out;
  out << "n,rep,error,clipped_fraction\n";
  for (const auto* r : sorted)
    out << r->n << ',' << r->rep << ',' << format_double(r->error) << ','
        << format_double(r->clipped_fraction) << '\n';
  return out.str();
}

std::vector<std::string> experiment_preset_names() {
  return {"ac5", "ac7", "ac9", "smoke", "general_tail"};
}

ExperimentConfig experiment_preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "ac5" || name == "ac9") {
    cfg.model = cpp_model(cpp_log_density());
    cfg.n_ladder = {1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14, 1 << 15};
    cfg.replications = 20;
    cfg.master_seed = 20250105;
    cfg.regime = Regime::cpp;
    cfg.x_max = 10.0;
    cfg.eval_lo = 0.2;
    cfg.eval_hi = 0.8;
    cfg.eval_points = 25;
    cfg.metric = Metric::copula_sup;
    if (name == "ac9") {
      cfg.n_ladder = {1 << 10, 1 << 11, 1 << 12};
      cfg.replications = 4;
      cfg.eval_points = 9;
    }
    return cfg;
  }
  if (name == "ac7") {
    cfg.model = cpp_model(point_masses({{Eigen::Vector2d(1.0, 1.0), 1.0}}));
    cfg.n_ladder = {1 << 8, 1 << 9, 1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14};
    cfg.replications = 50;
    cfg.master_seed = 20250107;
    cfg.metric = Metric::charfn_distance;
    cfg.eval_lo = 0.0;
    cfg.eval_hi = 10.0;
    cfg.eval_points = 41;
    return cfg;
  }
  if (name == "smoke") {
    cfg.model = cpp_model(point_masses({{Eigen::Vector2d(1.0, 1.0), 1.0}}));
    cfg.n_ladder = {1024};
    cfg.replications = 1;
    cfg.metric = Metric::eta_weighted_tail_sup;
    cfg.eval_lo = 0.1;
    cfg.eval_hi = 5.0;
    cfg.eval_points = 15;
    return cfg;
  }
  if (name == "general_tail") {
    cfg.model = compensated_model(beta_family(0.5), Eigen::Matrix2d::Identity());
    cfg.n_ladder = {1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14};
    cfg.replications = 10;
    cfg.master_seed = 20250103;
    cfg.regime = Regime::general;
    cfg.metric = Metric::eta_weighted_tail_sup;
    cfg.eval_lo = 0.1;
    cfg.eval_hi = 5.0;
    cfg.eval_points = 15;
    return cfg;
  }
  throw std::invalid_argument("unknown experiment preset '" + name + "'");
}

}  // namespace levycop
