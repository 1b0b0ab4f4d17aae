#include "levycop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "levycop/fft.hpp"
#include "levycop/quadrature.hpp"

namespace levycop {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double inverse_quartic(double x1, double x2) {
  const double a = x1 * x1;
  const double b = x2 * x2;
  return 1.0 / (a * a + b * b);
}

double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

// Moments of g over a rectangle about (cx, cy): int g, int g d1, int g d2,
// int g d1^2, int g d2^2, int g d1 d2 with d = x - c.
using Moments = std::array<double, 6>;

Moments rect_moments(double x0, double x1, double y0, double y1, double cx, double cy,
                     const quad::Rule& ref) {
  Moments m{};
  const double hx = 0.5 * (x1 - x0);
  const double hy = 0.5 * (y1 - y0);
  const double mx = 0.5 * (x0 + x1);
  const double my = 0.5 * (y0 + y1);
  for (Eigen::Index p = 0; p < ref.nodes.size(); ++p) {
    const double x = mx + hx * ref.nodes(p);
    const double d1 = x - cx;
    for (Eigen::Index q = 0; q < ref.nodes.size(); ++q) {
      const double y = my + hy * ref.nodes(q);
      const double d2 = y - cy;
      const double w = ref.weights(p) * ref.weights(q) * hx * hy * inverse_quartic(x, y);
      m[0] += w;
      m[1] += w * d1;
      m[2] += w * d2;
      m[3] += w * d1 * d1;
      m[4] += w * d2 * d2;
      m[5] += w * d1 * d2;
    }
  }
  return m;
}

constexpr int kNearCells = 8;

const quad::Rule& near_rule() {
  static const quad::Rule rule = quad::gauss_legendre(16);
  return rule;
}

const quad::Rule& far_rule() {
  static const quad::Rule rule = quad::gauss_legendre(6);
  return rule;
}

const quad::Rule& rule_for(int i, int j) {
  return std::max(i, j) < kNearCells ? near_rule() : far_rule();
}

// Cell moments depend only on (cells, dx); estimates on a common grid share them.
using CellMoments = std::array<Eigen::ArrayXXd, 6>;

std::shared_ptr<const CellMoments> cell_moments(int cells, double dx) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const CellMoments>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({cells, dx});
    if (it != cache.end()) return it->second;
  }
  auto moments = std::make_shared<CellMoments>();
  for (auto& a : *moments) a = Eigen::ArrayXXd::Zero(cells, cells);
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      if (i == 0 && j == 0) continue;
      const Moments m = rect_moments(i * dx, (i + 1) * dx, j * dx, (j + 1) * dx, (i + 0.5) * dx,
                                     (j + 0.5) * dx, rule_for(i, j));
      for (int s = 0; s < 6; ++s) (*moments)[s](i, j) = m[s];
    }
  std::lock_guard lock(mutex);
  if (cache.size() >= 4) cache.clear();
  cache[{cells, dx}] = moments;
  return moments;
}

double combine(const std::array<Eigen::ArrayXXd, 6>& local, int i, int j, const Moments& m,
               double dx) {
  const double s = dx * dx / 12.0;
  return local[0](i, j) * m[0] + local[1](i, j) * m[1] + local[2](i, j) * m[2] +
         0.5 * local[3](i, j) * (m[3] - s * m[0]) + 0.5 * local[4](i, j) * (m[4] - s * m[0]) +
         local[5](i, j) * m[5];
}

// Axis spacing and half-width of a symmetric uniform lattice.
std::pair<double, int> lattice(const Eigen::VectorXd& axis) {
  const Eigen::Index n = axis.size();
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("spectral: q axis must be symmetric and odd");
  const int half = static_cast<int>(n / 2);
  const double du = axis(n - 1) / half;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(axis(i) - (i - half) * du) > 1e-9 * du)
      throw std::invalid_argument("spectral: q axis is not a uniform symmetric lattice");
  return {du, half};
}

}  // namespace

double kernel_fk(const Eigen::Vector2d& u, double h) {
  return std::max(0.0, 1.0 - h * std::abs(u.x())) * std::max(0.0, 1.0 - h * std::abs(u.y()));
}

double kernel_k1(double x) {
  if (std::abs(x) < 1e-4) return (1.0 - x * x / 12.0) / (2.0 * kPi);
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / (kPi * x * x);
}

double kernel_kh(const Eigen::Vector2d& x, double h) {
  return kernel_k1(x.x() / h) * kernel_k1(x.y() / h) / (h * h);
}

std::string to_string(Regime regime) { return regime == Regime::cpp ? "cpp" : "general"; }

Regime regime_from_string(const std::string& name) {
  if (name == "cpp") return Regime::cpp;
  if (name == "general" || name == "levy") return Regime::general;
  throw std::invalid_argument("unknown regime '" + name + "'");
}

double bandwidth(long n, Regime regime, double c) {
  if (n < 16) throw std::invalid_argument("bandwidth: n must be at least 16");
  if (!(c > 0)) throw std::invalid_argument("bandwidth: multiplier must be positive");
  const double dn = static_cast<double>(n);
  if (regime == Regime::cpp) return c / std::sqrt(dn);
  return c * std::log(std::log(dn)) / std::sqrt(std::log(dn));
}

Eigen::VectorXd make_u_axis(double h, const SpectralConfig& cfg) {
  if (!(h > 0)) throw std::invalid_argument("make_u_axis: h must be positive");
  if (!(cfg.x_max > 0)) throw std::invalid_argument("make_u_axis: x_max must be positive");
  const double du = kPi / cfg.x_max;
  const int half = static_cast<int>(std::floor((1.0 / h) / du * (1.0 + 1e-12)));
  return symmetric_axis(du, std::max(half, 1));
}

TailEstimate smoothed_weighted_density(const LogDerivGrid& q, double h, int grid_points,
                                       double delta_floor) {
  if (!(h > 0)) throw std::invalid_argument("smoothed_weighted_density: h must be positive");
  const auto [du1, half1] = lattice(q.u1);
  const auto [du2, half2] = lattice(q.u2);
  if (std::abs(du1 - du2) > 1e-12 * du1 || half1 != half2)
    throw std::invalid_argument("smoothed_weighted_density: axes must coincide");
  const double du = du1;
  const int half = half1;
  // Every lattice point with FK_h > 0 must be present, and no more.
  if (!(half * du <= 1.0 / h * (1.0 + 1e-12) && (half + 1) * du >= 1.0 / h * (1.0 - 1e-12)))
    throw std::invalid_argument("smoothed_weighted_density: q grid does not span [-1/h, 1/h]");

  TailEstimate te;
  te.h_ = h;
  const int n = fast_fft_size(std::max(grid_points, 2 * half + 1));
  const double period = 2.0 * kPi / du;
  te.fft_size_ = n;
  te.dx_ = period / n;
  te.cells_ = n / 2;
  if (delta_floor == 0.0) delta_floor = te.dx_;
  if (delta_floor < te.dx_ * (1.0 - 1e-12))
    throw std::invalid_argument("smoothed_weighted_density: delta_floor below grid resolution");
  te.delta_floor_ = delta_floor;
  te.conditioning_ = {q.min_modulus, q.clipped_fraction, q.clipped_fraction == 0.0};

  // Hermitian part of Q FK_h du^2 / 4 pi^2, times the cell-average factor.
  const double dx = te.dx_;
  const double scale = du * du / (4.0 * kPi * kPi);
  Eigen::ArrayXXcd base = Eigen::ArrayXXcd::Zero(n, n);
  double defect = 0.0;
  auto cell_factor = [&](double u) { return std::polar(sinc(0.5 * u * dx), -0.5 * u * dx); };
  for (int j = -half; j <= half; ++j)
    for (int i = -half; i <= half; ++i) {
      const double u1 = i * du;
      const double u2 = j * du;
      const cd value = q.q(i + half, j + half);
      const cd mirror = std::conj(q.q(half - i, half - j));
      defect += 0.5 * std::abs(value - mirror);
      const cd s = 0.5 * (value + mirror) * kernel_fk({u1, u2}, h) * scale;
      base((i + n) % n, (j + n) % n) = s * cell_factor(u1) * cell_factor(u2);
    }
  te.imaginary_residual_ = defect * scale;

  // Three packed transforms: (avg, d1), (d2, d11), (d22, d12).
  std::array<Eigen::ArrayXXcd, 3> packed;
  for (auto& a : packed) a.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const double u2 = (j <= n / 2 ? j : j - n) * du;
    for (int i = 0; i < n; ++i) {
      const double u1 = (i <= n / 2 ? i : i - n) * du;
      const cd t = base(i, j);
      packed[0](i, j) = t * (1.0 + u1);
      packed[1](i, j) = t * (-kI * u2 - kI * u1 * u1);
      packed[2](i, j) = t * (-u2 * u2 - kI * u1 * u2);
    }
  }
  base.resize(0, 0);
  for (auto& a : packed) fft2(a, -1);

  const int m = te.cells_;
  te.x_axis_.resize(n);
  for (int k = 0; k < n; ++k) te.x_axis_(k) = (k - n / 2 + 0.5) * dx;
  te.q_x_.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      te.q_x_(i, j) = packed[0]((i - n / 2 + n) % n, (j - n / 2 + n) % n).real();

  for (auto& a : te.local_) a.resize(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      te.local_[0](i, j) = packed[0](i, j).real();
      te.local_[1](i, j) = packed[0](i, j).imag();
      te.local_[2](i, j) = packed[1](i, j).real();
      te.local_[3](i, j) = packed[1](i, j).imag();
      te.local_[4](i, j) = packed[2](i, j).real();
      te.local_[5](i, j) = packed[2](i, j).imag();
    }
  for (auto& a : packed) a.resize(0, 0);

  const auto moments = cell_moments(m, dx);
  te.suffix_ = Eigen::ArrayXXd::Zero(m + 1, m + 1);
  for (int j = m - 1; j >= 0; --j)
    for (int i = m - 1; i >= 0; --i) {
      Moments cm;
      for (int s = 0; s < 6; ++s) cm[s] = (*moments)[s](i, j);
      const double c = (i == 0 && j == 0) ? 0.0 : combine(te.local_, i, j, cm, dx);
      te.suffix_(i, j) = c + te.suffix_(i + 1, j) + te.suffix_(i, j + 1) - te.suffix_(i + 1, j + 1);
    }
  return te;
}

double TailEstimate::cell_part(int i, int j, double x0, double x1, double y0, double y1) const {
  if (!(x1 > x0) || !(y1 > y0)) return 0.0;
  const Moments m =
      rect_moments(x0, x1, y0, y1, (i + 0.5) * dx_, (j + 0.5) * dx_, rule_for(i, j));
  return combine(local_, i, j, m, dx_);
}

double TailEstimate::raw(double a, double b) const {
  if (!(a >= 0) || !(b >= 0)) throw std::invalid_argument("tail estimate: negative argument");
  if (std::max(a, b) < delta_floor_ * (1.0 - 1e-12))
    throw std::domain_error("tail estimate: query below delta_floor in both coordinates");
  const double top = extent();
  if (a > top * (1.0 + 1e-12) || b > top * (1.0 + 1e-12))
    throw std::out_of_range("tail estimate: query outside the x-grid");
  // First fully included cell and the partially included one (or -1).
  auto split = [&](double v, int& full, int& part) {
    const double s = v / dx_;
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-9) {
      full = static_cast<int>(r);
      part = -1;
    } else {
      full = static_cast<int>(std::ceil(s));
      part = full - 1;
    }
    full = std::min(full, cells_);
  };
  int fa, pa, fb, pb;
  split(a, fa, pa);
  split(b, fb, pb);
  double sum = suffix_(fa, fb);
  if (pa >= 0)
    for (int j = fb; j < cells_; ++j)
      sum += cell_part(pa, j, a, (pa + 1) * dx_, j * dx_, (j + 1) * dx_);
  if (pb >= 0)
    for (int i = fa; i < cells_; ++i)
      sum += cell_part(i, pb, i * dx_, (i + 1) * dx_, b, (pb + 1) * dx_);
  if (pa >= 0 && pb >= 0) sum += cell_part(pa, pb, a, (pa + 1) * dx_, b, (pb + 1) * dx_);
  return sum;
}

double TailEstimate::clipped(double a, double b) const { return std::max(0.0, raw(a, b)); }

double tail_integral_estimate(const TailEstimate& te, double a, double b) {
  return te.clipped(a, b);
}

TailCurve tail_curve(const TailEstimate& te, int axis, double delta) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("tail_curve: axis must be 1 or 2");
  if (delta < te.dx() * (1.0 - 1e-12))
    throw std::invalid_argument("tail_curve: delta below grid resolution");
  if (delta > te.extent()) throw std::invalid_argument("tail_curve: delta outside the grid");
  std::vector<double> xs{delta};
  for (int i = 1; i < te.cells(); ++i) {
    const double x = i * te.dx();
    if (x > delta * (1.0 + 1e-12)) xs.push_back(x);
  }
  TailCurve curve;
  curve.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  curve.value.resize(curve.x.size());
  for (Eigen::Index k = 0; k < curve.x.size(); ++k)
    curve.value(k) = axis == 1 ? te.clipped(curve.x(k), 0.0) : te.clipped(0.0, curve.x(k));
  return curve;
}

void write_tail_csv(std::ostream& out, const TailEstimate& te, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
  out << "a,b,n_hat_clipped,n_hat_raw\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const double raw = te.raw(a(i), b(j));
      out << a(i) << ',' << b(j) << ',' << std::max(0.0, raw) << ',' << raw << '\n';
    }
}

Eigen::ArrayXXcd g_transform(double a, double b, const Eigen::VectorXd& v1,
                             const Eigen::VectorXd& v2, const PlancherelOptions& opts) {
  if (!(a >= 0 && b >= 0) || a + b == 0.0)
    throw std::invalid_argument("g_transform: need (a, b) in the quadrant minus the origin");
  const double vmax = std::max({v1.cwiseAbs().maxCoeff(), v2.cwiseAbs().maxCoeff(), 1.0});
  const double max_width = std::min(1.0, 6.0 / vmax);
  const double min_width = 0.02 * std::max(a, b);
  const quad::Rule r1 =
      quad::composite(quad::graded_breaks(a, opts.x_radius, max_width, min_width), opts.x_nodes);
  const quad::Rule r2 =
      quad::composite(quad::graded_breaks(b, opts.x_radius, max_width, min_width), opts.x_nodes);
  Eigen::MatrixXd w(r1.nodes.size(), r2.nodes.size());
  for (Eigen::Index q = 0; q < r2.nodes.size(); ++q)
    for (Eigen::Index p = 0; p < r1.nodes.size(); ++p)
      w(p, q) = r1.weights(p) * r2.weights(q) * inverse_quartic(r1.nodes(p), r2.nodes(q));
  Eigen::MatrixXcd e1(v1.size(), r1.nodes.size());
  Eigen::MatrixXcd e2(v2.size(), r2.nodes.size());
  for (Eigen::Index p = 0; p < r1.nodes.size(); ++p)
    for (Eigen::Index k = 0; k < v1.size(); ++k) e1(k, p) = std::polar(1.0, v1(k) * r1.nodes(p));
  for (Eigen::Index q = 0; q < r2.nodes.size(); ++q)
    for (Eigen::Index k = 0; k < v2.size(); ++k) e2(k, q) = std::polar(1.0, v2(k) * r2.nodes(q));
  const Eigen::MatrixXcd left = e1 * w.cast<cd>();
  return (left * e2.transpose()).array();
}

double tail_integral_plancherel(const Spectrum& q, double h, double a, double b,
                                const PlancherelOptions& opts) {
  std::vector<double> breaks;
  for (int p = -opts.u_panels; p <= opts.u_panels; ++p)
    breaks.push_back(p / (h * opts.u_panels));
  const quad::Rule rule = quad::composite(breaks, opts.u_nodes);
  const Eigen::VectorXd& u = rule.nodes;
  const Eigen::ArrayXXcd fg = g_transform(a, b, -u, -u, opts);
  cd total = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j)
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double fk = kernel_fk({u(i), u(j)}, h);
      if (fk == 0.0) continue;
      total += rule.weights(i) * rule.weights(j) * fk * fg(i, j) * q(u(i), u(j));
    }
  return total.real() / (4.0 * kPi * kPi);
}

}  // namespace levycop
