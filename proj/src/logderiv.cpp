#include "levycop/logderiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace levycop {

namespace {

using cd = std::complex<double>;

cd floored(cd value, double floor, bool& clipped) {
  const double m = std::abs(value);
  clipped = m < floor;
  if (!clipped) return value;
  if (m == 0.0) return floor;
  return value * (floor / m);
}

}  // namespace

Eigen::ArrayXXcd fourth_log_derivative(const CharFnGrid& grid, int k, double floor,
                                       long* clipped) {
  if (k < 1 || k > 2) throw std::invalid_argument("fourth_log_derivative: k must be 1 or 2");
  if (!(floor >= 0.0)) throw std::invalid_argument("fourth_log_derivative: floor must be >= 0");
  const auto& phi = grid.phi;
  const auto& d1 = grid.at(1, k);
  const auto& d2 = grid.at(2, k);
  const auto& d3 = grid.at(3, k);
  const auto& d4 = grid.at(4, k);
  // Underflowed values of phi are treated as clipped so that q stays finite.
  const double lower = std::max(floor, std::numeric_limits<double>::min());
  Eigen::ArrayXXcd out(phi.rows(), phi.cols());
  long count = 0;
  for (Eigen::Index j = 0; j < phi.cols(); ++j)
    for (Eigen::Index i = 0; i < phi.rows(); ++i) {
      bool hit = false;
      const cd inv = 1.0 / floored(phi(i, j), lower, hit);
      count += hit;
      const cd r1 = d1(i, j) * inv;
      const cd r2 = d2(i, j) * inv;
      const cd r3 = d3(i, j) * inv;
      const cd r4 = d4(i, j) * inv;
      const cd r1s = r1 * r1;
      out(i, j) = r4 - 4.0 * r1 * r3 - 3.0 * r2 * r2 + 12.0 * r1s * r2 - 6.0 * r1s * r1s;
    }
  if (clipped) *clipped = count;
  return out;
}

LogDerivGrid log_derivative_sum(const CharFnGrid& grid, double floor) {
  LogDerivGrid out;
  out.u1 = grid.u1;
  out.u2 = grid.u2;
  out.floor = floor;
  long clipped = 0;
  out.q = fourth_log_derivative(grid, 1, floor, &clipped);
  out.q += fourth_log_derivative(grid, 2, floor);
  out.min_modulus = grid.phi.size() ? grid.phi.abs().minCoeff() : 0.0;
  out.clipped_fraction =
      grid.phi.size() ? static_cast<double>(clipped) / static_cast<double>(grid.phi.size()) : 0.0;
  return out;
}

double default_floor(long n, double c) {
  if (n <= 0) return 0.0;
  return c / std::sqrt(static_cast<double>(n));
}

ConditioningReport conditioning_report(const CharFnGrid& grid, double h, double floor) {
  if (!(h > 0)) throw std::invalid_argument("conditioning_report: h must be positive");
  const double limit = 1.0 / h * (1.0 + 1e-12);
  ConditioningReport report;
  report.min_modulus = std::numeric_limits<double>::infinity();
  long inside = 0;
  long clipped = 0;
  for (Eigen::Index j = 0; j < grid.cols(); ++j) {
    if (std::abs(grid.u2(j)) > limit) continue;
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
      if (std::abs(grid.u1(i)) > limit) continue;
      const double m = std::abs(grid.phi(i, j));
      report.min_modulus = std::min(report.min_modulus, m);
      ++inside;
      clipped += m < floor;
    }
  }
  if (inside == 0) report.min_modulus = 0.0;
  report.clipped_fraction = inside ? static_cast<double>(clipped) / inside : 0.0;
  report.well_conditioned = clipped == 0;
  return report;
}

}  // namespace levycop
