#include "levycop/quadrature.hpp"

#include <cstdio>
#include <numbers>
#include <utility>

namespace levycop::quad {

namespace {

// Legendre polynomial P_n(x) and its derivative.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

std::string describe_failure(double a, double b, double value, double error, double l1) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "adaptive quadrature did not converge on [%.17g, %.17g]: value %.6g, error %.3g, "
                "L1 %.6g",
                a, b, value, error, l1);
  return buf;
}

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  Rule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  if (n == 1) {
    rule.nodes << 0.0;
    rule.weights << 2.0;
    return rule;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

Rule composite(const std::vector<double>& breaks, int per_panel) {
  const Rule base = gauss_legendre(per_panel);
  const int panels = static_cast<int>(breaks.size()) - 1;
  Rule rule{Eigen::VectorXd(panels * per_panel), Eigen::VectorXd(panels * per_panel)};
  for (int p = 0; p < panels; ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    rule.nodes.segment(p * per_panel, per_panel) =
        (mid + half * base.nodes.array()).matrix();
    rule.weights.segment(p * per_panel, per_panel) = half * base.weights;
  }
  return rule;
}

std::vector<double> graded_breaks(double a, double b, double max_width,
                                  double min_width) {
  std::vector<double> breaks{a};
  double width = std::min(min_width, max_width);
  while (breaks.back() < b) {
    breaks.push_back(std::min(b, breaks.back() + width));
    width = std::min(max_width, 2.0 * width);
  }
  return breaks;
}

}  // namespace levycop::quad
