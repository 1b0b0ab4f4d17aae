#include "levycop/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "levycop/nufft.hpp"
#include "levycop/simulate.hpp"

namespace levycop {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr Eigen::Index kChunk = 2048;
constexpr Eigen::Index kNufftThreshold = 4096;

// (i z)^l for l = 0..4.
cd ipow(double z, int l) {
  switch (l) {
    case 0: return 1.0;
    case 1: return kI * z;
    case 2: return -z * z;
    case 3: return -kI * z * z * z;
    default: return z * z * z * z;
  }
}

// Spacing of a symmetric uniform axis, or 0 if the axis is not of that form.
double uniform_spacing(const Eigen::VectorXd& axis) {
  const Eigen::Index n = axis.size();
  if (n % 2 == 0) return 0.0;
  const Eigen::Index half = n / 2;
  if (half == 0) return axis(0) == 0.0 ? 1.0 : 0.0;
  const double du = axis(n - 1) / static_cast<double>(half);
  if (!(du > 0)) return 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(axis(i) - (i - half) * du) > 1e-9 * du) return 0.0;
  return du;
}

void fill_direct(CharFnGrid& grid, const Eigen::Matrix<double, Eigen::Dynamic, 2>& z) {
  const Eigen::Index n = z.rows();
  const Eigen::Index rows = grid.rows();
  const Eigen::Index cols = grid.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  grid.phi.setZero();
  for (auto& direction : grid.derivative)
    for (auto& a : direction) a.setZero();

  for (Eigen::Index start = 0; start < n; start += kChunk) {
    const Eigen::Index m = std::min(kChunk, n - start);
    Eigen::MatrixXcd e1(rows, m);
    Eigen::MatrixXcd e2(cols, m);
    for (Eigen::Index t = 0; t < m; ++t) {
      const double z1 = z(start + t, 0);
      const double z2 = z(start + t, 1);
      for (Eigen::Index i = 0; i < rows; ++i) e1(i, t) = std::polar(1.0, grid.u1(i) * z1);
      for (Eigen::Index j = 0; j < cols; ++j) e2(j, t) = std::polar(inv_n, grid.u2(j) * z2);
    }
    grid.phi += (e1 * e2.transpose()).array();
    for (int l = 1; l <= 4; ++l) {
      Eigen::MatrixXcd scaled1 = e1;
      Eigen::MatrixXcd scaled2 = e2;
      for (Eigen::Index t = 0; t < m; ++t) {
        scaled1.col(t) *= ipow(z(start + t, 0), l);
        scaled2.col(t) *= ipow(z(start + t, 1), l);
      }
      grid.derivative[0][l - 1] += (scaled1 * e2.transpose()).array();
      grid.derivative[1][l - 1] += (e1 * scaled2.transpose()).array();
    }
  }
}

void fill_nufft(CharFnGrid& grid, const Eigen::Matrix<double, Eigen::Dynamic, 2>& z, double du1,
                double du2) {
  const Eigen::Index n = z.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXcd weights(n, 9);
  for (Eigen::Index t = 0; t < n; ++t) {
    weights(t, 0) = inv_n;
    for (int l = 1; l <= 4; ++l) {
      weights(t, l) = inv_n * ipow(z(t, 0), l);
      weights(t, 4 + l) = inv_n * ipow(z(t, 1), l);
    }
  }
  const Eigen::VectorXd x = du1 * z.col(0);
  const Eigen::VectorXd y = du2 * z.col(1);
  const int half1 = static_cast<int>(grid.rows() / 2);
  const int half2 = static_cast<int>(grid.cols() / 2);
  auto modes = nufft_type1(x, y, weights, half1, half2);
  grid.phi = std::move(modes[0]);
  for (int l = 1; l <= 4; ++l) {
    grid.derivative[0][l - 1] = std::move(modes[l]);
    grid.derivative[1][l - 1] = std::move(modes[4 + l]);
  }
  // The origin is a plain sample average; store it exactly.
  cd sums[9] = {};
  for (Eigen::Index t = 0; t < n; ++t)
    for (int s = 0; s < 9; ++s) sums[s] += weights(t, s);
  grid.phi(half1, half2) = sums[0];
  for (int l = 1; l <= 4; ++l) {
    grid.derivative[0][l - 1](half1, half2) = sums[l];
    grid.derivative[1][l - 1](half1, half2) = sums[4 + l];
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

CharFnGrid::CharFnGrid(Eigen::VectorXd axis1, Eigen::VectorXd axis2)
    : u1(std::move(axis1)), u2(std::move(axis2)) {
  for (Eigen::Index i = 1; i < u1.size(); ++i)
    if (!(u1(i) > u1(i - 1))) throw std::invalid_argument("CharFnGrid: axis 1 not increasing");
  for (Eigen::Index j = 1; j < u2.size(); ++j)
    if (!(u2(j) > u2(j - 1))) throw std::invalid_argument("CharFnGrid: axis 2 not increasing");
  phi = Eigen::ArrayXXcd::Zero(u1.size(), u2.size());
  for (auto& direction : derivative)
    for (auto& a : direction) a = Eigen::ArrayXXcd::Zero(u1.size(), u2.size());
}

const Eigen::ArrayXXcd& CharFnGrid::at(int l, int k) const {
  if (l == 0) return phi;
  if (l < 0 || l > 4 || k < 1 || k > 2) throw std::out_of_range("CharFnGrid::at");
  return derivative[k - 1][l - 1];
}

Eigen::ArrayXXcd& CharFnGrid::at(int l, int k) {
  return const_cast<Eigen::ArrayXXcd&>(std::as_const(*this).at(l, k));
}

bool CharFnGrid::same_axes(const CharFnGrid& other) const {
  return u1.size() == other.u1.size() && u2.size() == other.u2.size() && u1 == other.u1 &&
         u2 == other.u2;
}

Eigen::VectorXd symmetric_axis(double du, int half) {
  Eigen::VectorXd axis(2 * half + 1);
  for (int i = -half; i <= half; ++i) axis(i + half) = i * du;
  return axis;
}

CharFnGrid ecf_grid(const IncrementPanel& panel, const Eigen::VectorXd& u1,
                    const Eigen::VectorXd& u2, EcfMethod method) {
  if (panel.z.rows() == 0) throw std::invalid_argument("ecf_grid: empty panel");
  if (!panel.z.allFinite()) throw std::invalid_argument("ecf_grid: non-finite increments");
  if (!u1.allFinite() || !u2.allFinite()) throw std::invalid_argument("ecf_grid: non-finite axis");
  CharFnGrid grid(u1, u2);
  grid.n = panel.z.rows();
  const double du1 = uniform_spacing(u1);
  const double du2 = uniform_spacing(u2);
  const bool nufft_ok = du1 > 0 && du2 > 0;
  if (method == EcfMethod::nufft && !nufft_ok)
    throw std::invalid_argument("ecf_grid: nufft path needs symmetric uniform axes");
  const bool use_nufft =
      method == EcfMethod::nufft ||
      (method == EcfMethod::automatic && nufft_ok && u1.size() * u2.size() >= kNufftThreshold);
  if (use_nufft)
    fill_nufft(grid, panel.z, du1, du2);
  else
    fill_direct(grid, panel.z);
  // phi_n(0) = 1 holds exactly; summation leaves rounding there.
  for (Eigen::Index i = 0; i < u1.size(); ++i)
    for (Eigen::Index j = 0; j < u2.size(); ++j)
      if (u1(i) == 0.0 && u2(j) == 0.0) grid.phi(i, j) = 1.0;
  return grid;
}

CharFnGrid multiply(const CharFnGrid& a, const CharFnGrid& b) {
  if (!a.same_axes(b)) throw std::invalid_argument("multiply: grid mismatch");
  CharFnGrid out(a.u1, a.u2);
  out.n = std::max(a.n, b.n);
  out.phi = a.phi * b.phi;
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 4; ++l) {
      Eigen::ArrayXXcd sum = Eigen::ArrayXXcd::Zero(a.rows(), a.cols());
      for (int m = 0; m <= l; ++m) sum += binomial(l, m) * a.at(m, k) * b.at(l - m, k);
      out.at(l, k) = std::move(sum);
    }
  return out;
}

double weight(const Eigen::Vector2d& u, double delta) {
  return std::pow(std::log(std::numbers::e + u.norm()), -0.5 - delta);
}

double weighted_sup_distance(const CharFnGrid& g1, const CharFnGrid& g2,
                             const WeightedMetricConfig& cfg) {
  if (!g1.same_axes(g2)) throw std::invalid_argument("weighted_sup_distance: grid mismatch");
  if (!(cfg.delta_exponent > 0)) throw std::invalid_argument("weighted_sup_distance: delta <= 0");
  Eigen::ArrayXXd w(g1.rows(), g1.cols());
  for (Eigen::Index j = 0; j < g1.cols(); ++j)
    for (Eigen::Index i = 0; i < g1.rows(); ++i)
      w(i, j) = weight(Eigen::Vector2d(g1.u1(i), g1.u2(j)), cfg.delta_exponent);
  double total = ((g1.phi - g2.phi).abs() * w).maxCoeff();
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 4; ++l) total += ((g1.at(l, k) - g2.at(l, k)).abs() * w).maxCoeff();
  return total;
}

void write_grid_csv(std::ostream& out, const CharFnGrid& grid, int l, int k) {
  const auto& a = grid.at(l, k);
  out << "u1,u2,re,im\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.cols(); ++j)
      out << grid.u1(i) << ',' << grid.u2(j) << ',' << a(i, j).real() << ',' << a(i, j).imag()
          << '\n';
}

namespace {

constexpr char kMagic[8] = {'L', 'V', 'C', 'G', 'R', 'I', 'D', '1'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("read_grid_binary: truncated input");
  return v;
}

}  // namespace

void write_grid_binary(std::ostream& out, const CharFnGrid& grid) {
  out.write(kMagic, sizeof kMagic);
  put<std::int64_t>(out, grid.rows());
  put<std::int64_t>(out, grid.cols());
  put<std::int64_t>(out, grid.n);
  for (Eigen::Index i = 0; i < grid.rows(); ++i) put(out, grid.u1(i));
  for (Eigen::Index j = 0; j < grid.cols(); ++j) put(out, grid.u2(j));
  auto dump = [&](const Eigen::ArrayXXcd& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        put(out, a(i, j).real());
        put(out, a(i, j).imag());
      }
  };
  dump(grid.phi);
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 4; ++l) dump(grid.at(l, k));
}

CharFnGrid read_grid_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + 8, kMagic))
    throw std::runtime_error("read_grid_binary: bad header");
  const auto rows = get<std::int64_t>(in);
  const auto cols = get<std::int64_t>(in);
  const auto n = get<std::int64_t>(in);
  if (rows < 0 || cols < 0) throw std::runtime_error("read_grid_binary: bad dimensions");
  Eigen::VectorXd u1(rows);
  Eigen::VectorXd u2(cols);
  for (auto& v : u1) v = get<double>(in);
  for (auto& v : u2) v = get<double>(in);
  CharFnGrid grid(u1, u2);
  grid.n = n;
  auto load = [&](Eigen::ArrayXXcd& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        a(i, j) = {re, im};
      }
  };
  load(grid.phi);
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 4; ++l) load(grid.at(l, k));
  return grid;
}

}  // namespace levycop
