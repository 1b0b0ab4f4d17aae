#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace levycop {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace quad {

//! Nodes and weights of a fixed rule.
struct Rule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

//! n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

//! Gauss-Legendre with `per_panel` nodes on every panel [breaks[i], breaks[i+1]].
Rule composite(const std::vector<double>& breaks, int per_panel);

//! Panel breaks on [a, b] with width at most `max_width`, geometrically refined
//! towards `a` down to `min_width`.
std::vector<double> graded_breaks(double a, double b, double max_width,
                                  double min_width);

std::string describe_failure(double a, double b, double value, double error, double l1);

namespace detail {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Bisection driver around the fixed 15-point Kronrod rule. Boost's own
// recursion reports subinterval errors on the reference interval, so the
// scaling is done here.
template <class F>
void kronrod_bisect(F& f, double a, double b, double abs_tol, unsigned depth, Estimate& acc) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  double l1 = 0.0;
  const double v = Kronrod::integrate(f, a, b, 0, 0.0, &err, &l1);
  err *= 0.5 * (b - a);
  if (depth > 0 && err > abs_tol && std::isfinite(v)) {
    const double mid = 0.5 * (a + b);
    if (mid > a && mid < b) {
      kronrod_bisect(f, a, mid, 0.5 * abs_tol, depth - 1, acc);
      kronrod_bisect(f, mid, b, 0.5 * abs_tol, depth - 1, acc);
      return;
    }
  }
  acc.value += v;
  acc.error += err;
  acc.l1 += l1;
}

}  // namespace detail

//! Adaptive Gauss-Kronrod (15 point) on [a, b] with relative tolerance `tol`;
//! b may be +infinity.
template <class F>
double adaptive(F&& f, double a, double b, double tol, unsigned depth = 30) {
  if (a == b) return 0.0;
  detail::Estimate acc;
  auto run = [&](auto& g, double lo, double hi) {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    double l1 = 0.0;
    const double first = Kronrod::integrate(g, lo, hi, 0, 0.0, nullptr, &l1);
    const double abs_tol = std::max(tol * std::abs(first), tol * 1e-3 * l1);
    detail::kronrod_bisect(g, lo, hi, abs_tol, depth, acc);
  };
  if (std::isinf(b)) {
    auto g = [&](double t) {
      const double s = 1.0 - t;
      return t < 1.0 ? f(a + t / s) / (s * s) : 0.0;
    };
    run(g, 0.0, 1.0);
  } else {
    run(f, a, b);
  }
  if (!std::isfinite(acc.value) || acc.error > std::max(100.0 * tol * acc.l1, 1e-300))
    throw QuadratureError(describe_failure(a, b, acc.value, acc.error, acc.l1));
  return acc.value;
}

//! Tanh-sinh on [a, b] for integrands with endpoint singularities.
template <class F>
double endpoint_singular(F&& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0.0;
  double l1 = 0.0;
  const double v = ts.integrate(f, a, b, tol, &err, &l1);
  if (!std::isfinite(v) || err > std::max(100.0 * tol * l1, 1e-300))
    throw QuadratureError("tanh-sinh quadrature did not converge");
  return v;
}

//! Radius of the logarithmic substitution region (0, kLogRegion].
inline constexpr double kLogRegion = 0.5;

//! r = exp(-1/t); maps t in (0, 1/log(1/r_c)] onto (0, r_c].
inline double log_radius(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
inline double log_parameter(double r) { return r > 0 ? -1.0 / std::log(r) : 0.0; }

//! Integral of f over (lo, hi] where f may carry power or 1/(r log^2 r)
//! singularities at zero. The part below kLogRegion is integrated in
//! t = -1/log r, where such integrands become smooth.
template <class F>
double radial(F&& f, double lo, double hi, double tol) {
  double total = 0.0;
  const double split = std::min(hi, kLogRegion);
  if (lo < split) {
    auto g = [&](double t) {
      // Below r = 1e-100 the integrand is continued by its value there; power
      // weights would otherwise overflow.
      constexpr double kMinParameter = 1.0 / 230.25850929940458;
      const double tt = std::max(t, kMinParameter);
      const double r = log_radius(tt);
      return f(r) * r / (tt * tt);
    };
    total += adaptive(g, log_parameter(lo), log_parameter(split), tol);
  }
  if (hi > kLogRegion) total += adaptive(f, std::max(lo, kLogRegion), hi, tol);
  return total;
}

}  // namespace quad
}  // namespace levycop
