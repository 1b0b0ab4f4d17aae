#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "levycop/logderiv.hpp"

namespace levycop {

//! Fejer product kernel in Fourier space: (1 - h|u1|)_+ (1 - h|u2|)_+.
double kernel_fk(const Eigen::Vector2d& u, double h);

//! One-dimensional kernel K1 with F K1(u) = (1 - |u|)_+, i.e. (1 - cos x) / (pi x^2).
double kernel_k1(double x);

//! K_h(x) = h^{-2} K1(x1 / h) K1(x2 / h).
double kernel_kh(const Eigen::Vector2d& x, double h);

enum class Regime { general, cpp };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

//! c loglog(n) / sqrt(log n) (general) or c / sqrt(n) (cpp).
double bandwidth(long n, Regime regime, double c = 1.0);

struct SpectralConfig {
  int grid_points = 1024;  //!< minimum FFT length per axis
  double x_max = 20.0;     //!< the x-grid covers [-x_max, x_max)^2
};

//! Symmetric u-axis with spacing pi / x_max holding every lattice point of
//! [-1/h, 1/h].
Eigen::VectorXd make_u_axis(double h, const SpectralConfig& cfg = {});

//! Grid form of the tail-integral estimator
//!   N(a, b) = int_{[a,inf) x [b,inf)} q_x(x) / (x1^4 + x2^4) dx,
//! q_x = Re F^{-1}(Q FK_h). The x-grid consists of cells of width dx with
//! corners at multiples of dx; integrals over whole cells come from a 2-D
//! suffix sum, cells cut by a query boundary are integrated separately.
class TailEstimate {
 public:
  double h() const { return h_; }
  double dx() const { return dx_; }
  //! Largest admissible query coordinate.
  double extent() const { return dx_ * cells_; }
  int cells() const { return cells_; }
  int fft_size() const { return fft_size_; }
  double delta_floor() const { return delta_floor_; }
  //! Upper bound on |Im F^{-1}(Q FK_h)| from the Hermitian defect of the input.
  double imaginary_residual() const { return imaginary_residual_; }
  const ConditioningReport& conditioning() const { return conditioning_; }

  //! Cell centres of the full x-grid, ascending.
  const Eigen::VectorXd& x_axis() const { return x_axis_; }
  //! Cell averages of q_x on the full grid, indexed like x_axis x x_axis.
  const Eigen::ArrayXXd& q_x() const { return q_x_; }

  //! Unclipped estimate.
  double raw(double a, double b) const;
  //! max(raw, 0).
  double clipped(double a, double b) const;

 private:
  friend TailEstimate smoothed_weighted_density(const LogDerivGrid&, double, int, double);

  double cell_part(int i, int j, double x0, double x1, double y0, double y1) const;

  double h_ = 0.0;
  double dx_ = 0.0;
  int cells_ = 0;
  int fft_size_ = 0;
  double delta_floor_ = 0.0;
  double imaginary_residual_ = 0.0;
  ConditioningReport conditioning_;
  Eigen::VectorXd x_axis_;
  Eigen::ArrayXXd q_x_;
  // Positive quadrant, cells_ x cells_: average, gradient and Hessian averages.
  std::array<Eigen::ArrayXXd, 6> local_;
  Eigen::ArrayXXd suffix_;  // (cells_ + 1)^2
};

//! Inverts Q FK_h on the x-grid. The q-grid must be a symmetric uniform
//! lattice holding exactly the lattice points of [-1/h, 1/h]^2. The FFT length
//! is at least `grid_points`. `delta_floor` defaults to one cell width and must
//! not be smaller.
TailEstimate smoothed_weighted_density(const LogDerivGrid& q, double h, int grid_points = 1024,
                                       double delta_floor = 0.0);

//! max(N(a, b), 0). Requires max(a, b) >= delta_floor and a, b <= extent.
double tail_integral_estimate(const TailEstimate& te, double a, double b);

struct TailCurve {
  Eigen::VectorXd x;
  Eigen::VectorXd value;
};

//! x -> N(x, 0) (axis 1) or N(0, x) (axis 2) at delta and at the cell
//! corners beyond delta.
TailCurve tail_curve(const TailEstimate& te, int axis, double delta);

//! CSV rows (a, b, n_hat_clipped, n_hat_raw) over the product of the ladders.
void write_tail_csv(std::ostream& out, const TailEstimate& te, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b);

using Spectrum = std::function<std::complex<double>(double, double)>;

struct PlancherelOptions {
  int u_panels = 32;      //!< GL panels per half axis of [-1/h, 1/h]
  int u_nodes = 12;
  double x_radius = 20.0;
  int x_nodes = 16;
};

//! g_{a,b} transform F g(v) = int_{[a,inf) x [b,inf)} e^{i<v,x>} / (x1^4 + x2^4) dx
//! on the product of `v1` and `v2`, by tensor Gauss-Legendre quadrature.
Eigen::ArrayXXcd g_transform(double a, double b, const Eigen::VectorXd& v1,
                             const Eigen::VectorXd& v2, const PlancherelOptions& opts = {});

//! u-space route (1 / 4 pi^2) int F g_{a,b}(-u) Q(u) FK_h(u) du.
double tail_integral_plancherel(const Spectrum& q, double h, double a, double b,
                                const PlancherelOptions& opts = {});

}  // namespace levycop
