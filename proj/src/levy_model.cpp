#include "levycop/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include "levycop/quadrature.hpp"

namespace levycop {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double quartic(double x1, double x2) {
  const double a = x1 * x1;
  const double b = x2 * x2;
  return a * a + b * b;
}

void require_radial(const JumpDensitySpec& spec, const char* what) {
  if (!spec.is_radial())
    throw std::invalid_argument(std::string(what) + ": radial density kind required");
}

// int_lo^hi g(r) dr for integrands carrying radial_density; hi may be infinite.
template <class G>
double ray_integral(G&& g, double lo, double hi, double tol) {
  if (!(hi > lo)) return 0.0;
  double total = 0.0;
  if (lo < quad::kLogRegion)
    total += quad::radial(g, lo, std::min(hi, quad::kLogRegion), tol);
  const double mid = 0.75;
  const double start = std::max(lo, quad::kLogRegion);
  if (hi > start) {
    if (start < mid && hi > mid) {
      total += quad::adaptive(g, start, mid, tol);
      total += quad::adaptive(g, mid, hi, tol);
    } else {
      total += quad::adaptive(g, start, hi, tol);
    }
  }
  return total;
}

// r_min(theta) for the quadrant [a, inf) x [b, inf).
double entry_radius(double a, double b, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double ra = a > 0 ? (c > 0 ? a / c : kInfinity) : 0.0;
  const double rb = b > 0 ? (s > 0 ? b / s : kInfinity) : 0.0;
  return std::max(ra, rb);
}

// Outer angular integral split at the kink of the entry radius.
template <class G>
double angular_integral(G&& g, double a, double b, double tol) {
  const double kink = std::atan2(b, a);
  double total = 0.0;
  if (kink > 0.0) total += quad::adaptive(g, 0.0, kink, tol);
  if (kink < kHalfPi) total += quad::adaptive(g, kink, kHalfPi, tol);
  return total;
}

double point_mass_tail(const JumpDensitySpec& spec, double a, double b) {
  double sum = 0.0;
  for (const auto& atom : spec.atoms)
    if (atom.location.x() >= a && atom.location.y() >= b) sum += atom.weight;
  return sum;
}

double point_mass_inverse(const JumpDensitySpec& spec, int k, double u) {
  std::vector<double> coords;
  for (const auto& atom : spec.atoms) coords.push_back(atom.location(k - 1));
  std::sort(coords.begin(), coords.end());
  // inf{x > 0 : U_k(x) <= u}; U_k is a left-continuous step function.
  double best = 0.0;
  for (double c : coords) {
    const double above =
        k == 1 ? point_mass_tail(spec, std::nextafter(c, kInfinity), 0.0)
               : point_mass_tail(spec, 0.0, std::nextafter(c, kInfinity));
    const double at = k == 1 ? point_mass_tail(spec, c, 0.0) : point_mass_tail(spec, 0.0, c);
    if (at > u && above <= u) best = c;
  }
  if (best == 0.0) throw std::domain_error("marginal_inverse_truth: u outside range");
  return best;
}

}  // namespace

double smooth_cutoff(double r) {
  if (r <= 0.5) return 1.0;
  if (r >= 0.75) return 0.0;
  const double s = (r - 0.5) / 0.25;
  const double left = std::exp(-1.0 / (1.0 - s));
  const double right = std::exp(-1.0 / s);
  return left / (left + right);
}

double angular_weight(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return 1.0 / quartic(c, s);
}

bool JumpDensitySpec::is_radial() const {
  return kind == DensityKind::beta_family || kind == DensityKind::beta_two ||
         kind == DensityKind::cpp_log_density;
}

bool JumpDensitySpec::finite_activity() const {
  return kind == DensityKind::cpp_log_density || kind == DensityKind::point_masses ||
         kind == DensityKind::custom;
}

double JumpDensitySpec::profile(double r) const {
  switch (kind) {
    case DensityKind::beta_family:
      return r > 0 ? std::pow(r, 2.0 - beta) * std::exp(-r) : 0.0;
    case DensityKind::beta_two: {
      if (r <= 0) return 0.0;
      const double cut = smooth_cutoff(r);
      double value = (1.0 - cut) * std::exp(-r);
      if (cut > 0) {
        const double lr = std::log(r);
        value += cut / (lr * lr);
      }
      return value;
    }
    case DensityKind::cpp_log_density: {
      if (r <= 0) return 0.0;
      const double cut = smooth_cutoff(r);
      double value = (1.0 - cut) * std::exp(-r);
      if (cut > 0) {
        const double lr = std::log(r);
        value += r * r * cut / (lr * lr);
      }
      return value;
    }
    default:
      throw std::logic_error("profile: density kind is not radial");
  }
}

double JumpDensitySpec::weighted_density(double x1, double x2) const {
  if (is_radial()) return profile(std::hypot(x1, x2));
  if (kind == DensityKind::custom) return custom_f(x1, x2);
  throw std::logic_error("weighted_density: point masses have no density");
}

double JumpDensitySpec::density(double x1, double x2) const {
  const double q = quartic(x1, x2);
  const double f = weighted_density(x1, x2);
  // An underflowed quartic with f = 0 is a removable 0/0, not a pole.
  if (q == 0.0) return f == 0.0 ? 0.0 : kInfinity;
  return f / q;
}

double JumpDensitySpec::radial_density(double r) const {
  return r > 0 ? profile(r) / r / r / r : kInfinity;
}

JumpDensitySpec make_density(DensityKind kind, const DensityParams& params) {
  JumpDensitySpec spec;
  spec.kind = kind;
  spec.label = params.label;
  switch (kind) {
    case DensityKind::beta_family:
      if (!(params.beta >= 0.0 && params.beta < 2.0))
        throw std::invalid_argument("beta_family: beta must lie in [0, 2)");
      spec.beta = params.beta;
      if (spec.label.empty()) spec.label = "beta_family(" + std::to_string(params.beta) + ")";
      break;
    case DensityKind::beta_two:
      spec.beta = 2.0;
      if (spec.label.empty()) spec.label = "beta_two";
      break;
    case DensityKind::cpp_log_density:
      spec.beta = 0.0;
      if (spec.label.empty()) spec.label = "cpp_log_density";
      break;
    case DensityKind::point_masses:
      for (const auto& atom : params.atoms) {
        if (!(atom.weight > 0.0))
          throw std::invalid_argument("point_masses: weights must be positive");
        if (atom.location.x() < 0 || atom.location.y() < 0 ||
            atom.location.isZero(0.0))
          throw std::invalid_argument("point_masses: locations must lie in R+^2 \\ {0}");
      }
      spec.atoms = params.atoms;
      if (spec.label.empty()) spec.label = "point_masses";
      break;
    case DensityKind::custom:
      if (!params.custom_f) throw std::invalid_argument("custom: density callback missing");
      spec.custom_f = params.custom_f;
      if (spec.label.empty()) spec.label = "custom";
      break;
  }
  return spec;
}

JumpDensitySpec beta_family(double beta) {
  return make_density(DensityKind::beta_family, DensityParams{.beta = beta, .atoms = {}, .custom_f = {}, .label = {}});
}
JumpDensitySpec beta_two() { return make_density(DensityKind::beta_two); }
JumpDensitySpec cpp_log_density() { return make_density(DensityKind::cpp_log_density); }
JumpDensitySpec point_masses(std::vector<PointMass> atoms) {
  return make_density(DensityKind::point_masses,
                      DensityParams{.beta = 0.5, .atoms = std::move(atoms), .custom_f = {}, .label = {}});
}
JumpDensitySpec custom_density(PlaneFunction f, std::string label) {
  return make_density(DensityKind::custom, DensityParams{.beta = 0.5, .atoms = {}, .custom_f = std::move(f),
                                                   .label = std::move(label)});
}

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::beta_family: return "beta_family";
    case DensityKind::beta_two: return "beta_two";
    case DensityKind::cpp_log_density: return "cpp_log_density";
    case DensityKind::point_masses: return "point_masses";
    case DensityKind::custom: return "custom";
  }
  return "unknown";
}

DensityKind density_kind_from_string(const std::string& name) {
  for (auto kind : {DensityKind::beta_family, DensityKind::beta_two,
                    DensityKind::cpp_log_density, DensityKind::point_masses,
                    DensityKind::custom})
    if (to_string(kind) == name) return kind;
  throw std::invalid_argument("unknown density kind '" + name + "'");
}

LevyModelSpec compensated_model(JumpDensitySpec jumps, const Eigen::Matrix2d& sigma,
                                const Eigen::Vector2d& alpha) {
  LevyModelSpec model;
  model.sigma = sigma;
  model.alpha = alpha;
  model.representation = Representation::compensated;
  model.intensity = jumps.finite_activity() ? total_mass(jumps) : kInfinity;
  model.label = jumps.label;
  model.jumps = std::move(jumps);
  validate(model);
  return model;
}

LevyModelSpec cpp_model(JumpDensitySpec jumps, const Eigen::Vector2d& alpha) {
  LevyModelSpec model;
  model.alpha = alpha;
  model.representation = Representation::uncompensated;
  model.intensity = total_mass(jumps);
  model.label = jumps.label;
  model.jumps = std::move(jumps);
  validate(model);
  return model;
}

LevyModelSpec gaussian_model(const Eigen::Matrix2d& sigma) {
  LevyModelSpec model;
  model.sigma = sigma;
  model.jumps = point_masses({});
  model.jumps.label = "none";
  model.intensity = 0.0;
  model.label = "gaussian";
  validate(model);
  return model;
}

void validate(const LevyModelSpec& model) {
  if (!model.sigma.isApprox(model.sigma.transpose(), 1e-12))
    throw std::invalid_argument("sigma must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(model.sigma);
  if (eig.eigenvalues().minCoeff() < -1e-12)
    throw std::invalid_argument("sigma must be positive semidefinite");
  if (model.representation == Representation::uncompensated) {
    if (!model.jumps.finite_activity() || !std::isfinite(model.intensity))
      throw std::invalid_argument("uncompensated representation needs finite intensity");
    if (!model.sigma.isZero(0.0))
      throw std::invalid_argument("uncompensated representation needs sigma = 0");
  }
}

double angular_moment(int i, int j) {
  auto g = [=](double t) {
    return angular_weight(t) * std::pow(std::cos(t), i) * std::pow(std::sin(t), j);
  };
  return quad::adaptive(g, 0.0, kHalfPi, 1e-13);
}

double radial_moment(const JumpDensitySpec& spec, double p, double lo, double hi,
                     double tol) {
  require_radial(spec, "radial_moment");
  auto g = [&](double r) { return std::pow(r, p) * spec.radial_density(r); };
  return ray_integral(g, lo, hi, tol);
}

double radial_tail(const JumpDensitySpec& spec, double rho, double tol) {
  require_radial(spec, "radial_tail");
  if (!std::isfinite(rho)) return 0.0;
  if (rho <= 0.0 && !spec.finite_activity()) return kInfinity;
  return radial_moment(spec, 0.0, rho, kInfinity, tol);
}

double total_mass(const JumpDensitySpec& spec, double tol) {
  switch (spec.kind) {
    case DensityKind::point_masses: {
      double sum = 0.0;
      for (const auto& atom : spec.atoms) sum += atom.weight;
      return sum;
    }
    case DensityKind::custom:
      return tail_integral_generic(spec, 0.0, 0.0, tol);
    default:
      if (!spec.finite_activity()) return kInfinity;
      return angular_moment(0, 0) * radial_tail(spec, 0.0, tol);
  }
}

double tail_integral_truth(const JumpDensitySpec& spec, double a, double b, double tol) {
  if (a < 0 || b < 0) throw std::invalid_argument("tail_integral_truth: negative argument");
  if (spec.kind == DensityKind::point_masses) return point_mass_tail(spec, a, b);
  if (a == 0.0 && b == 0.0) {
    if (!spec.finite_activity())
      throw std::domain_error("tail_integral_truth: (0,0) query on infinite-activity spec");
    return total_mass(spec, tol);
  }
  if (!spec.is_radial()) return tail_integral_generic(spec, a, b, tol);
  auto g = [&](double theta) {
    const double rho = entry_radius(a, b, theta);
    if (!std::isfinite(rho)) return 0.0;
    return angular_weight(theta) * radial_tail(spec, rho, 0.1 * tol);
  };
  return angular_integral(g, a, b, tol);
}

double tail_integral_generic(const JumpDensitySpec& spec, double a, double b, double tol) {
  if (spec.kind == DensityKind::point_masses) return point_mass_tail(spec, a, b);
  if (a == 0.0 && b == 0.0 && !spec.finite_activity())
    throw std::domain_error("tail_integral_generic: (0,0) query on infinite-activity spec");
  auto g = [&](double theta) {
    const double rho = entry_radius(a, b, theta);
    if (!std::isfinite(rho)) return 0.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto ray = [&](double r) { return spec.density(r * c, r * s) * r; };
    return ray_integral(ray, rho, kInfinity, 0.1 * tol);
  };
  return angular_integral(g, a, b, tol);
}

double tail_integral_cartesian(const JumpDensitySpec& spec, double a, double b,
                               int panels_per_unit, double radius) {
  if (spec.kind == DensityKind::point_masses) return point_mass_tail(spec, a, b);
  const double width = 1.0 / panels_per_unit;
  const auto axis = [&](double lo) {
    return quad::composite(quad::graded_breaks(lo, radius, width, width / 64.0), 8);
  };
  const quad::Rule r1 = axis(a);
  const quad::Rule r2 = axis(b);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < r1.nodes.size(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < r2.nodes.size(); ++j)
      row += r2.weights(j) * spec.density(r1.nodes(i), r2.nodes(j));
    sum += r1.weights(i) * row;
  }
  return sum;
}

double marginal_tail_truth(const JumpDensitySpec& spec, int k, double x, double tol) {
  if (k != 1 && k != 2) throw std::invalid_argument("marginal index must be 1 or 2");
  return k == 1 ? tail_integral_truth(spec, x, 0.0, tol) : tail_integral_truth(spec, 0.0, x, tol);
}

double marginal_inverse_truth(const JumpDensitySpec& spec, int k, double u, double tol) {
  if (!(u > 0.0)) throw std::domain_error("marginal_inverse_truth: u must be positive");
  if (spec.finite_activity() && u >= total_mass(spec))
    throw std::domain_error("marginal_inverse_truth: u outside (0, Lambda)");
  if (spec.kind == DensityKind::point_masses) return point_mass_inverse(spec, k, u);
  auto f = [&](double x) { return marginal_tail_truth(spec, k, x, 0.1 * tol) - u; };
  double lo = 1.0;
  double hi = 1.0;
  while (f(lo) < 0.0) {
    lo *= 0.5;
    if (lo < 1e-14) throw std::domain_error("marginal_inverse_truth: u outside range");
  }
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e3) throw std::domain_error("marginal_inverse_truth: u outside range");
  }
  if (lo == hi) {
    if (f(lo) == 0.0) return lo;
    hi = 2.0 * lo;
  }
  std::uintmax_t iters = 200;
  const auto [x0, x1] = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(48), iters);
  return 0.5 * (x0 + x1);
}

bool uses_cpp_copula(const LevyModelSpec& model) {
  return model.representation == Representation::uncompensated;
}

double copula_truth(const LevyModelSpec& model, double u, double v, double tol) {
  const auto& spec = model.jumps;
  if (uses_cpp_copula(model)) {
    if (!(u > 0 && u < 1 && v > 0 && v < 1))
      throw std::domain_error("copula_truth: CPP copula needs u, v in (0, 1)");
    const double lambda = model.intensity;
    const double a = marginal_inverse_truth(spec, 1, lambda * (1.0 - u), tol);
    const double b = marginal_inverse_truth(spec, 2, lambda * (1.0 - v), tol);
    return 1.0 + (tail_integral_truth(spec, a, b, tol) - marginal_tail_truth(spec, 1, a, tol) -
                  marginal_tail_truth(spec, 2, b, tol)) /
                     lambda;
  }
  if (!(u > 0 && v > 0)) throw std::domain_error("copula_truth: u, v must be positive");
  const double a = marginal_inverse_truth(spec, 1, u, tol);
  const double b = marginal_inverse_truth(spec, 2, v, tol);
  return tail_integral_truth(spec, a, b, tol);
}

TruthTables make_truth_tables(const LevyModelSpec& model, double tol) {
  TruthTables t;
  t.quadrature_tol = tol;
  t.U = [spec = model.jumps, tol](double a, double b) {
    return tail_integral_truth(spec, a, b, tol);
  };
  t.U1 = [spec = model.jumps, tol](double x) { return marginal_tail_truth(spec, 1, x, tol); };
  t.U2 = [spec = model.jumps, tol](double x) { return marginal_tail_truth(spec, 2, x, tol); };
  t.copula = [model, tol](double u, double v) { return copula_truth(model, u, v, tol); };
  return t;
}

double eta(double a, double b) {
  const double n2 = a * a + b * b;
  return std::min(n2, n2 * n2);
}

Eigen::ArrayXXcd weighted_fourier_transform(const JumpDensitySpec& spec,
                                            const Eigen::VectorXd& u1,
                                            const Eigen::VectorXd& u2) {
  if (!spec.has_density())
    throw std::invalid_argument("weighted_fourier_transform: density kind required");
  const double umax = std::max(u1.cwiseAbs().maxCoeff(), u2.cwiseAbs().maxCoeff());
  const double width = std::min(0.5, 10.0 / std::max(umax, 1.0));
  const quad::Rule rule =
      quad::composite(quad::graded_breaks(0.0, 45.0, width, 1e-4), 16);
  const Eigen::Index m = rule.nodes.size();

  Eigen::MatrixXd weighted(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i)
      weighted(i, j) = rule.weights(i) * rule.weights(j) *
                       spec.weighted_density(rule.nodes(i), rule.nodes(j));

  const Eigen::MatrixXd phase1 = u1 * rule.nodes.transpose();
  const Eigen::MatrixXd cos_part = phase1.array().cos().matrix() * weighted;
  const Eigen::MatrixXd sin_part = phase1.array().sin().matrix() * weighted;
  const Eigen::MatrixXd phase2 = rule.nodes * u2.transpose();
  const Eigen::MatrixXd c2 = phase2.array().cos().matrix();
  const Eigen::MatrixXd s2 = phase2.array().sin().matrix();
  // (C + iS)(c2 + i s2)
  Eigen::ArrayXXcd out(u1.size(), u2.size());
  out.real() = (cos_part * c2 - sin_part * s2).array();
  out.imag() = (cos_part * s2 + sin_part * c2).array();
  return out;
}

namespace {

double fd_step(double x, double y) {
  return std::min(1e-4 * std::max(1.0, std::hypot(x, y)), 0.25 * std::min(x, y));
}

double mixed_fd(const PlaneFunction& g, double x, double y) {
  const double e = fd_step(x, y);
  return (g(x + e, y + e) - g(x + e, y - e) - g(x - e, y + e) + g(x - e, y - e)) / (4 * e * e);
}

quad::Rule variation_rule(double lo, double scale, double radius) {
  return quad::composite(quad::graded_breaks(lo, radius, 0.5, 1e-3 * scale), 10);
}

}  // namespace

double mixed_variation(const PlaneFunction& g, double a, double b, double radius) {
  const double scale = std::max(std::hypot(a, b), 1e-3);
  const quad::Rule r1 = variation_rule(a, scale, radius);
  const quad::Rule r2 = variation_rule(b, scale, radius);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < r1.nodes.size(); ++i)
    for (Eigen::Index j = 0; j < r2.nodes.size(); ++j)
      sum += r1.weights(i) * r2.weights(j) * std::abs(mixed_fd(g, r1.nodes(i), r2.nodes(j)));
  return sum;
}

double variation_constant(const PlaneFunction& g, double a, double b, double radius) {
  const double scale = std::max(std::hypot(a, b), 1e-3);
  const quad::Rule r1 = variation_rule(a, scale, radius);
  const quad::Rule r2 = variation_rule(b, scale, radius);
  double edge1 = 0.0;
  for (Eigen::Index i = 0; i < r1.nodes.size(); ++i) {
    const double x = r1.nodes(i);
    const double e = std::min(1e-5 * std::max(1.0, x), 0.25 * (x - a) + 1e-12);
    edge1 += r1.weights(i) * std::abs(g(x + e, b) - g(x - e, b)) / (2 * e);
  }
  double edge2 = 0.0;
  for (Eigen::Index j = 0; j < r2.nodes.size(); ++j) {
    const double y = r2.nodes(j);
    const double e = std::min(1e-5 * std::max(1.0, y), 0.25 * (y - b) + 1e-12);
    edge2 += r2.weights(j) * std::abs(g(a, y + e) - g(a, y - e)) / (2 * e);
  }
  return std::abs(g(a, b)) + edge1 + edge2 + mixed_variation(g, a, b, radius);
}

DecayReport check_fourier_decay(const JumpDensitySpec& spec, const Eigen::VectorXd& u1,
                                const Eigen::VectorXd& u2) {
  if (!spec.has_density())
    throw std::invalid_argument("check_fourier_decay: point masses have no density");
  const Eigen::ArrayXXcd ft = weighted_fourier_transform(spec, u1, u2);
  DecayReport report;
  for (Eigen::Index j = 0; j < u2.size(); ++j)
    for (Eigen::Index i = 0; i < u1.size(); ++i) {
      const double scaled =
          std::abs(ft(i, j)) * (1 + std::abs(u1(i))) * (1 + std::abs(u2(j)));
      if (scaled > report.c_estimate) {
        report.c_estimate = scaled;
        report.worst_u = {u1(i), u2(j)};
      }
    }
  const PlaneFunction f = [&spec](double x1, double x2) {
    return spec.weighted_density(std::max(x1, 0.0), std::max(x2, 0.0));
  };
  report.lambda_g = variation_constant(f, 0.0, 0.0);
  return report;
}

double blumenthal_getoor_estimate(const JumpDensitySpec& spec, double eps_small,
                                  double eps_large) {
  require_radial(spec, "blumenthal_getoor_estimate");
  const double small = radial_moment(spec, 0.0, eps_small, 1.0);
  const double large = radial_moment(spec, 0.0, eps_large, 1.0);
  return -(std::log(small) - std::log(large)) / (std::log(eps_small) - std::log(eps_large));
}

}  // namespace levycop
