#include <algorithm>
#include <cmath>
#include <memory>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "levycop/quadrature.hpp"
#include "levycop/simulate.hpp"

namespace levycop {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kHalfPi = 0.5 * std::numbers::pi;

// e^{iz} - 1 and e^{iz} - 1 - iz without cancellation for small real z.
cd expm1_i(double z) {
  const double s = std::sin(0.5 * z);
  return {-2.0 * s * s, std::sin(z)};
}

cd expm1_i_linear(double z) {
  const double s = std::sin(0.5 * z);
  double odd;
  if (std::abs(z) < 0.1) {
    const double z2 = z * z;
    odd = -z * z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0)));
  } else {
    odd = std::sin(z) - z;
  }
  return {-2.0 * s * s, odd};
}

// (e^{eps z} - 1) / eps, continuous at eps = 0.
cd expm1_scaled(cd z, double eps) {
  const cd w = eps * z;
  if (std::abs(w) < 1e-3)
    return z * (1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0))));
  return (std::exp(w) - 1.0) / eps;
}

// Radial transforms R_l(omega) = int r^l k_l(omega r) rho(r) dr, l = 0..4, with
// k_0 the compensated (or plain) exponent kernel, k_1 its derivative kernel and
// k_l = e^{i omega r} for l >= 2.
using RadialValues = std::array<cd, 5>;

class RadialTransform {
 public:
  virtual ~RadialTransform() = default;
  virtual RadialValues operator()(double omega) const = 0;
};

class BetaTransform final : public RadialTransform {
 public:
  explicit BetaTransform(double beta)
      : beta_(beta),
        g2_(boost::math::tgamma(2.0 - beta)),
        g3_(boost::math::tgamma(3.0 - beta)),
        g4_(boost::math::tgamma(4.0 - beta)) {}

  RadialValues operator()(double omega) const override {
    const cd p{1.0, -omega};
    const cd log_p{0.5 * std::log1p(omega * omega), -std::atan(omega)};
    const cd p2 = std::exp(-(2.0 - beta_) * log_p);
    const cd p3 = p2 / p;
    const cd p4 = p3 / p;
    RadialValues out;
    if (beta_ < 0.5)
      out[0] = g2_ * (expm1_scaled(log_p, beta_) + kI * omega) / (beta_ - 1.0);
    else
      out[0] = g2_ * (p * expm1_scaled(log_p, beta_ - 1.0) + kI * omega) / beta_;
    out[1] = g2_ * expm1_scaled(-log_p, 1.0 - beta_);
    out[2] = g2_ * p2;
    out[3] = g3_ * p3;
    out[4] = g4_ * p4;
    return out;
  }

 private:
  double beta_;
  double g2_, g3_, g4_;
};

// Tabulated transform for densities without closed form: exact radial
// quadrature on a uniform omega table, local Lagrange interpolation between.
class TabulatedTransform final : public RadialTransform {
 public:
  TabulatedTransform(const JumpDensitySpec& spec, bool compensated, double omega_max) {
    build_rule(spec, omega_max);
    const double top = std::max(omega_max, 1.0) + kOrder * kStep;
    const int count = static_cast<int>(std::ceil(top / kStep)) + 1;
    table_.resize(count);
    for (int m = 0; m < count; ++m) table_[m] = direct(m * kStep, compensated);
  }

  RadialValues operator()(double omega) const override {
    const bool negative = omega < 0;
    const double w = std::abs(omega) / kStep;
    int first = static_cast<int>(std::floor(w)) - kOrder / 2 + 1;
    first = std::clamp(first, 0, static_cast<int>(table_.size()) - kOrder);
    RadialValues out{};
    for (int a = 0; a < kOrder; ++a) {
      double coeff = 1.0;
      for (int b = 0; b < kOrder; ++b)
        if (b != a) coeff *= (w - (first + b)) / static_cast<double>(a - b);
      for (int l = 0; l < 5; ++l) out[l] += coeff * table_[first + a][l];
    }
    if (negative)
      for (auto& v : out) v = std::conj(v);
    return out;
  }

 private:
  static constexpr double kStep = 0.01;
  static constexpr int kOrder = 8;

  void build_rule(const JumpDensitySpec& spec, double omega_max) {
    auto append = [&](const quad::Rule& rule, bool log_scale) {
      for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) {
        double r = rule.nodes(j);
        double w = rule.weights(j);
        if (log_scale) {
          // Same continuation below r = 1e-100 as quad::radial.
          const double t = std::max(r, 1.0 / 230.25850929940458);
          r = quad::log_radius(t);
          w *= r / (t * t);
        }
        radius_.push_back(r);
        weight_.push_back(w * spec.radial_density(r));
      }
    };
    std::vector<double> t_breaks;
    const double t_top = quad::log_parameter(quad::kLogRegion);
    for (int i = 0; i <= 16; ++i) t_breaks.push_back(t_top * i / 16.0);
    append(quad::composite(t_breaks, 16), true);
    std::vector<double> mid;
    for (int i = 0; i <= 4; ++i) mid.push_back(0.5 + 0.0625 * i);
    append(quad::composite(mid, 16), false);
    const double width = std::min(1.0, 6.0 / std::max(omega_max, 1.0));
    std::vector<double> tail;
    for (double r = 0.75; r < 40.0; r += width) tail.push_back(r);
    tail.push_back(40.0);
    append(quad::composite(tail, 12), false);
  }

  RadialValues direct(double omega, bool compensated) const {
    RadialValues out{};
    for (std::size_t j = 0; j < radius_.size(); ++j) {
      const double r = radius_[j];
      const double z = omega * r;
      const double w = weight_[j];
      const cd e = expm1_i(z);
      out[0] += w * (compensated ? expm1_i_linear(z) : e);
      out[1] += w * r * (compensated ? e : e + 1.0);
      const cd full = e + 1.0;
      const double r2 = r * r;
      out[2] += w * r2 * full;
      out[3] += w * r2 * r * full;
      out[4] += w * r2 * r2 * full;
    }
    return out;
  }

  std::vector<double> radius_;
  std::vector<double> weight_;
  std::vector<RadialValues> table_;
};

// Angular rule on [0, pi/2] refined around the direction where <u, (cos, sin)>
// is smallest in modulus; the radial transforms peak there for large |u|.
quad::Rule angular_rule(const Eigen::Vector2d& u) {
  std::vector<double> breaks;
  for (int i = 0; i <= 8; ++i) breaks.push_back(kHalfPi * i / 8.0);
  const double norm = u.norm();
  if (norm > 1.0) {
    double zero = std::atan2(u.y(), u.x()) + kHalfPi;
    zero = std::fmod(zero, std::numbers::pi);
    if (zero < 0) zero += std::numbers::pi;
    double centre = zero;
    if (zero > kHalfPi) centre = (zero - kHalfPi < std::numbers::pi - zero) ? kHalfPi : 0.0;
    for (double s = 0.25 / norm; s < kHalfPi; s *= 2.0) {
      if (centre - s > 0.0) breaks.push_back(centre - s);
      if (centre + s < kHalfPi) breaks.push_back(centre + s);
    }
    if (centre > 0.0 && centre < kHalfPi) breaks.push_back(centre);
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> unique;
  for (double b : breaks)
    if (unique.empty() || b - unique.back() > 1e-12) unique.push_back(b);
  unique.back() = kHalfPi;
  return quad::composite(unique, 16);
}

class ExponentEvaluator {
 public:
  ExponentEvaluator(const LevyModelSpec& model, double omega_max) : model_(model) {
    validate(model);
    compensated_ = model.representation == Representation::compensated;
    const auto& spec = model.jumps;
    if (spec.kind == DensityKind::custom)
      throw std::invalid_argument("exact_charfn: custom densities are not supported");
    if (spec.kind == DensityKind::beta_family) {
      if (!compensated_) throw std::invalid_argument("exact_charfn: beta_family needs compensation");
      transform_ = std::make_unique<BetaTransform>(spec.beta);
    } else if (spec.is_radial()) {
      transform_ = std::make_unique<TabulatedTransform>(spec, compensated_, omega_max);
    }
  }

  ExponentDerivatives operator()(const Eigen::Vector2d& u) const {
    ExponentDerivatives out{};
    const Eigen::Vector2d su = model_.sigma * u;
    out.value = -0.5 * u.dot(su) + kI * u.dot(model_.alpha);
    for (int k = 0; k < 2; ++k) {
      out.d[k][0] = -su(k) + kI * model_.alpha(k);
      out.d[k][1] = -model_.sigma(k, k);
    }
    if (model_.jumps.kind == DensityKind::point_masses)
      add_atoms(u, out);
    else
      add_radial(u, out);
    return out;
  }

 private:
  void add_atoms(const Eigen::Vector2d& u, ExponentDerivatives& out) const {
    for (const auto& atom : model_.jumps.atoms) {
      const double z = u.dot(atom.location);
      const cd e = expm1_i(z);
      const cd full = e + 1.0;
      out.value += atom.weight * (compensated_ ? expm1_i_linear(z) : e);
      for (int k = 0; k < 2; ++k) {
        const double x = atom.location(k);
        out.d[k][0] += atom.weight * kI * x * (compensated_ ? e : full);
        out.d[k][1] += -atom.weight * x * x * full;
        out.d[k][2] += -kI * atom.weight * x * x * x * full;
        out.d[k][3] += atom.weight * x * x * x * x * full;
      }
    }
  }

  void add_radial(const Eigen::Vector2d& u, ExponentDerivatives& out) const {
    const quad::Rule rule = angular_rule(u);
    for (Eigen::Index m = 0; m < rule.nodes.size(); ++m) {
      const double theta = rule.nodes(m);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const double w = rule.weights(m) * angular_weight(theta);
      const RadialValues r = (*transform_)(u.x() * c + u.y() * s);
      out.value += w * r[0];
      for (int k = 0; k < 2; ++k) {
        const double x = k == 0 ? c : s;
        const double x2 = x * x;
        out.d[k][0] += w * kI * x * r[1];
        out.d[k][1] += -w * x2 * r[2];
        out.d[k][2] += -w * kI * x2 * x * r[3];
        out.d[k][3] += w * x2 * x2 * r[4];
      }
    }
  }

  const LevyModelSpec& model_;
  bool compensated_ = true;
  std::unique_ptr<RadialTransform> transform_;
};

bool mirrored(const Eigen::VectorXd& axis) {
  const Eigen::Index n = axis.size();
  for (Eigen::Index i = 0; i < n; ++i)
    if (axis(i) != -axis(n - 1 - i)) return false;
  return true;
}

}  // namespace

ExponentDerivatives exponent_derivatives(const LevyModelSpec& model, const Eigen::Vector2d& u) {
  return ExponentEvaluator(model, u.norm())(u);
}

CharFnGrid exact_charfn(const LevyModelSpec& model, const Eigen::VectorXd& u1,
                        const Eigen::VectorXd& u2) {
  CharFnGrid grid(u1, u2);
  const double omega_max = std::sqrt(u1.cwiseAbs2().maxCoeff() + u2.cwiseAbs2().maxCoeff());
  const ExponentEvaluator evaluate(model, omega_max);
  const Eigen::Index rows = u1.size();
  const Eigen::Index total = rows * u2.size();
  const bool symmetric = mirrored(u1) && mirrored(u2);

  auto store = [&](Eigen::Index i, Eigen::Index j, const ExponentDerivatives& e) {
    const cd phi = std::exp(e.value);
    grid.phi(i, j) = phi;
    for (int k = 0; k < 2; ++k) {
      const cd d1 = e.d[k][0];
      const cd d2 = e.d[k][1];
      const cd d3 = e.d[k][2];
      const cd d4 = e.d[k][3];
      grid.derivative[k][0](i, j) = phi * d1;
      grid.derivative[k][1](i, j) = phi * (d2 + d1 * d1);
      grid.derivative[k][2](i, j) = phi * (d3 + 3.0 * d1 * d2 + d1 * d1 * d1);
      grid.derivative[k][3](i, j) =
          phi * (d4 + 4.0 * d1 * d3 + 3.0 * d2 * d2 + 6.0 * d1 * d1 * d2 + d1 * d1 * d1 * d1);
    }
  };

  for (Eigen::Index index = 0; index < total; ++index) {
    const Eigen::Index mirror = total - 1 - index;
    if (symmetric && mirror < index) continue;
    const Eigen::Index i = index % rows;
    const Eigen::Index j = index / rows;
    const ExponentDerivatives e = evaluate(Eigen::Vector2d(u1(i), u2(j)));
    store(i, j, e);
    if (symmetric && mirror != index) {
      // Real jump law: d^l Psi(-u) = (-1)^l conj(d^l Psi(u)).
      ExponentDerivatives m;
      m.value = std::conj(e.value);
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 4; ++l)
          m.d[k][l] = (l % 2 == 0 ? -1.0 : 1.0) * std::conj(e.d[k][l]);
      store(mirror % rows, mirror / rows, m);
    }
  }
  return grid;
}

}  // namespace levycop
