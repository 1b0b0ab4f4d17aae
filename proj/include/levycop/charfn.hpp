#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace levycop {

struct IncrementPanel;

//! Characteristic function and its pure partial derivatives d^l/du_k^l,
//! l = 0..4, k = 1, 2, on a rectangular grid. Arrays are indexed (i, j)
//! for the point (u1[i], u2[j]).
struct CharFnGrid {
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;
  Eigen::ArrayXXcd phi;
  //! derivative[k][l - 1] holds d^l/du_{k+1}^l, l = 1..4.
  std::array<std::array<Eigen::ArrayXXcd, 4>, 2> derivative;
  long n = 0;  //!< sample size, 0 for exact grids

  CharFnGrid() = default;
  CharFnGrid(Eigen::VectorXd axis1, Eigen::VectorXd axis2);

  //! Level-l array in direction k (l = 0 ignores k).
  const Eigen::ArrayXXcd& at(int l, int k) const;
  Eigen::ArrayXXcd& at(int l, int k);

  Eigen::Index rows() const { return u1.size(); }
  Eigen::Index cols() const { return u2.size(); }
  bool same_axes(const CharFnGrid& other) const;
};

//! Symmetric uniform axis du * (-half, ..., half).
Eigen::VectorXd symmetric_axis(double du, int half);

enum class EcfMethod { automatic, direct, nufft };

//! Empirical characteristic function and derivatives,
//! d^l/du_k^l phi_n(u) = (1/n) sum_t (i Z_{t,k})^l e^{i<u, Z_t>}.
//! `direct` is the exact O(n * grid) sum; `nufft` needs symmetric uniform axes.
CharFnGrid ecf_grid(const IncrementPanel& panel, const Eigen::VectorXd& u1,
                    const Eigen::VectorXd& u2, EcfMethod method = EcfMethod::automatic);

//! Grid of phi_A * phi_B with derivatives by the Leibniz rule.
CharFnGrid multiply(const CharFnGrid& a, const CharFnGrid& b);

//! w(u) = (log(e + |u|))^{-1/2 - delta}.
double weight(const Eigen::Vector2d& u, double delta);

struct WeightedMetricConfig {
  double delta_exponent = 0.25;
};

//! Grid version of d^(4): sum over levels 0..4 and directions of the weighted
//! sup norm of the difference (level 0 counted once). A lower bound of the
//! continuum supremum.
double weighted_sup_distance(const CharFnGrid& g1, const CharFnGrid& g2,
                             const WeightedMetricConfig& cfg = {});

//! Per-array CSV dump: rows "u1,u2,re,im".
void write_grid_csv(std::ostream& out, const CharFnGrid& grid, int l, int k);

//! Binary dump: header, axes, then the nine arrays row-major as interleaved
//! re/im doubles.
void write_grid_binary(std::ostream& out, const CharFnGrid& grid);
CharFnGrid read_grid_binary(std::istream& in);

}  // namespace levycop
