#pragma once

#include <Eigen/Core>

#include "levycop/charfn.hpp"

namespace levycop {

//! Sum of the fourth log-derivatives over both directions with the
//! denominator conditioning that produced it.
struct LogDerivGrid {
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;
  Eigen::ArrayXXcd q;
  double min_modulus = 0.0;
  double clipped_fraction = 0.0;
  double floor = 0.0;
};

//! d^4 log phi / du_k^4 from phi and its first four derivatives:
//!   phi4/phi - 4 phi1 phi3/phi^2 - 3 (phi2/phi)^2 + 12 phi1^2 phi2/phi^3 - 6 (phi1/phi)^4,
//! dividing by phi rescaled to modulus max(|phi|, floor) with its phase kept.
//! The floor is never below the smallest normal double.
//! `clipped` receives the number of floored points when non-null.
Eigen::ArrayXXcd fourth_log_derivative(const CharFnGrid& grid, int k, double floor,
                                       long* clipped = nullptr);

//! q = d^4 Psi / du_1^4 + d^4 Psi / du_2^4 with conditioning statistics.
LogDerivGrid log_derivative_sum(const CharFnGrid& grid, double floor);

//! floor = c / sqrt(n); zero for exact grids (n = 0).
double default_floor(long n, double c = 1.0);

struct ConditioningReport {
  double min_modulus = 0.0;
  double clipped_fraction = 0.0;
  bool well_conditioned = true;
};

//! Conditioning of |phi| over the square [-1/h, 1/h]^2.
ConditioningReport conditioning_report(const CharFnGrid& grid, double h, double floor);

}  // namespace levycop
