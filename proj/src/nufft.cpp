#include "levycop/nufft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "levycop/fft.hpp"

namespace levycop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Axis {
  int modes;      // 2 * half + 1
  int grid;       // oversampled FFT length
  double tau;     // Gaussian variance parameter
  double spacing; // 2 pi / grid
};

Axis make_axis(int half, int spread) {
  Axis ax;
  ax.modes = 2 * half + 1;
  ax.grid = fast_fft_size(std::max(2 * ax.modes, 2 * spread + 2));
  const double m = ax.modes + 1.0;
  const double ratio = ax.grid / m;
  ax.tau = std::numbers::pi * spread / (m * m * ratio * (ratio - 0.5));
  ax.spacing = kTwoPi / ax.grid;
  return ax;
}

// Spreading weights for one coordinate: grid index of the first affected point
// and the 2 * spread kernel values.
int kernel_row(const Axis& ax, double x, int spread, double* values) {
  double xt = std::fmod(x, kTwoPi);
  if (xt < 0) xt += kTwoPi;
  const int m0 = static_cast<int>(std::floor(xt / ax.spacing));
  const double d = xt - m0 * ax.spacing;
  const int first = m0 - spread + 1;
  for (int l = 0; l < 2 * spread; ++l) {
    const double offset = (l - spread + 1) * ax.spacing - d;
    values[l] = std::exp(-offset * offset / (4.0 * ax.tau));
  }
  return first;
}

}  // namespace

std::vector<Eigen::ArrayXXcd> nufft_type1(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                          const Eigen::MatrixXcd& weights, int half1,
                                          int half2, int spread) {
  const Eigen::Index n = x.size();
  if (y.size() != n || weights.rows() != n)
    throw std::invalid_argument("nufft_type1: size mismatch");
  const Axis ax1 = make_axis(half1, spread);
  const Axis ax2 = make_axis(half2, spread);
  const int width = 2 * spread;

  Eigen::MatrixXd k1(width, n);
  Eigen::MatrixXd k2(width, n);
  Eigen::VectorXi start1(n);
  Eigen::VectorXi start2(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    start1(t) = kernel_row(ax1, x(t), spread, k1.col(t).data());
    start2(t) = kernel_row(ax2, y(t), spread, k2.col(t).data());
  }

  std::vector<Eigen::ArrayXXcd> out;
  out.reserve(weights.cols());
  Eigen::ArrayXXcd grid(ax1.grid, ax2.grid);
  for (Eigen::Index s = 0; s < weights.cols(); ++s) {
    grid.setZero();
    for (Eigen::Index t = 0; t < n; ++t) {
      const std::complex<double> c = weights(t, s);
      if (c == 0.0) continue;
      for (int l2 = 0; l2 < width; ++l2) {
        int m2 = (start2(t) + l2) % ax2.grid;
        if (m2 < 0) m2 += ax2.grid;
        const std::complex<double> cy = c * k2(l2, t);
        std::complex<double>* column = &grid(0, m2);
        int m1 = (start1(t)) % ax1.grid;
        if (m1 < 0) m1 += ax1.grid;
        for (int l1 = 0; l1 < width; ++l1) {
          column[m1] += cy * k1(l1, t);
          if (++m1 == ax1.grid) m1 = 0;
        }
      }
    }
    fft2(grid, +1);
    Eigen::ArrayXXcd modes(ax1.modes, ax2.modes);
    // Deconvolve the Gaussian: sqrt(pi/tau) exp(k^2 tau) per axis.
    const double scale = std::numbers::pi / std::sqrt(ax1.tau * ax2.tau) /
                         (static_cast<double>(ax1.grid) * ax2.grid);
    for (int j = -half2; j <= half2; ++j) {
      const double f2 = scale * std::exp(j * double(j) * ax2.tau);
      const int g2 = j < 0 ? j + ax2.grid : j;
      for (int i = -half1; i <= half1; ++i) {
        const int g1 = i < 0 ? i + ax1.grid : i;
        modes(i + half1, j + half2) = f2 * std::exp(i * double(i) * ax1.tau) * grid(g1, g2);
      }
    }
    out.push_back(std::move(modes));
  }
  return out;
}

}  // namespace levycop
