#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <doctest.h>

#include "levycop/charfn.hpp"
#include "levycop/logderiv.hpp"
#include "levycop/simulate.hpp"
#include "levycop/spectral.hpp"

using namespace levycop;

namespace {

LevyModelSpec jump_at(double x1, double x2) {
  return cpp_model(point_masses({{Eigen::Vector2d(x1, x2), 1.0}}));
}

LogDerivGrid exact_q(const LevyModelSpec& model, double h, const SpectralConfig& cfg = {}) {
  const Eigen::VectorXd axis = make_u_axis(h, cfg);
  return log_derivative_sum(exact_charfn(model, axis, axis), 0.0);
}

TailEstimate exact_estimate(const LevyModelSpec& model, double h, const SpectralConfig& cfg = {}) {
  return smoothed_weighted_density(exact_q(model, h, cfg), h, cfg.grid_points);
}

// Cell average of K_h(x - centre) over the cell of width dx around x by
// tensor Gauss-Legendre.
double kernel_cell_average(double x1, double x2, double dx, double h) {
  constexpr double node = 0.3399810435848563;
  constexpr double outer = 0.8611363115940526;
  constexpr double w_node = 0.6521451548625461;
  constexpr double w_outer = 0.3478548451374538;
  const double nodes[4] = {-outer, -node, node, outer};
  const double weights[4] = {w_outer, w_node, w_node, w_outer};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      sum += weights[i] * weights[j] *
             kernel_kh({x1 + nodes[i] * dx / 2, x2 + nodes[j] * dx / 2}, h);
  return sum / 4;
}

double bias_bound(double h, double a, double b) {
  const double r2 = a * a + b * b;
  return std::abs(h * std::log(h)) * std::max(1.0 / r2, 1.0 / (r2 * r2));
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("Fejer kernel") {
    const double h = 0.2;
    CHECK(kernel_fk({0, 0}, h) == 1.0);
    CHECK(kernel_fk({1 / h, 0.3}, h) == 0.0);
    CHECK(kernel_fk({-1 / h, 0.0}, h) == 0.0);
    CHECK(kernel_fk({1 / (2 * h), 0}, h) == doctest::Approx(0.5));
    CHECK(kernel_fk({2.0, -1.0}, h) == doctest::Approx(0.6 * 0.8));
    CHECK(kernel_k1(0.0) == doctest::Approx(1 / (2 * std::numbers::pi)));
    CHECK(kernel_k1(2.0) == doctest::Approx((1 - std::cos(2.0)) / (4 * std::numbers::pi)));
    CHECK(kernel_kh({0.1, 0.2}, h) == doctest::Approx(kernel_k1(0.5) * kernel_k1(1.0) / (h * h)));
  }

  TEST_CASE("bandwidth") {
    CHECK(bandwidth(10000, Regime::cpp) == doctest::Approx(0.01));
    CHECK(bandwidth(16, Regime::general) ==
          doctest::Approx(std::log(std::log(16.0)) / std::sqrt(std::log(16.0))));
    CHECK(bandwidth(10000, Regime::cpp, 3.0) == doctest::Approx(0.03));
    CHECK_THROWS(bandwidth(15, Regime::general));
    CHECK_THROWS(bandwidth(100, Regime::cpp, 0.0));
    CHECK(regime_from_string(to_string(Regime::general)) == Regime::general);
    CHECK(regime_from_string("cpp") == Regime::cpp);
  }

  TEST_CASE("u-axis covers the kernel support") {
    const double h = 0.07;
    const SpectralConfig cfg{256, 15.0};
    const Eigen::VectorXd axis = make_u_axis(h, cfg);
    const double du = std::numbers::pi / cfg.x_max;
    CHECK(axis(1) - axis(0) == doctest::Approx(du));
    CHECK(axis.maxCoeff() <= 1 / h + 1e-12);
    CHECK(axis.maxCoeff() + du > 1 / h);
    CHECK(axis.minCoeff() == doctest::Approx(-axis.maxCoeff()));
  }

  TEST_CASE("zero input") {
    const double h = 0.2;
    const Eigen::VectorXd axis = make_u_axis(h);
    LogDerivGrid q;
    q.u1 = axis;
    q.u2 = axis;
    q.q = Eigen::ArrayXXcd::Zero(axis.size(), axis.size());
    const TailEstimate te = smoothed_weighted_density(q, h);
    CHECK(te.q_x().abs().maxCoeff() == 0.0);
    CHECK(tail_integral_estimate(te, 0.5, 0.5) == 0.0);
    CHECK(te.raw(1.0, 0.0) == 0.0);
  }

  TEST_CASE("grid must match the kernel support") {
    const double h = 0.2;
    LogDerivGrid q;
    q.u1 = symmetric_axis(0.1, 10);
    q.u2 = q.u1;
    q.q = Eigen::ArrayXXcd::Zero(q.u1.size(), q.u2.size());
    CHECK_THROWS(smoothed_weighted_density(q, h));
  }

  TEST_CASE("single jump smooths to the kernel") {
    const double h = 0.1;
    const TailEstimate te = exact_estimate(jump_at(1, 1), h);
    CHECK(te.imaginary_residual() <= 1e-10);
    // Q = 2 e^{i(u1 + u2)}, so q_x holds cell averages of 2 K_h(x - (1, 1)).
    const Eigen::VectorXd& x = te.x_axis();
    double worst = 0.0;
    Eigen::Index pi = 0;
    Eigen::Index pj = 0;
    te.q_x().maxCoeff(&pi, &pj);
    for (Eigen::Index i = 0; i < x.size(); i += 7)
      for (Eigen::Index j = 0; j < x.size(); j += 7)
        worst = std::max(worst, std::abs(te.q_x()(i, j) -
                                         2 * kernel_cell_average(x(i) - 1, x(j) - 1, te.dx(), h)));
    const double peak = 2 * kernel_kh({0, 0}, h);
    CHECK(worst <= 1e-3 * peak);
    CHECK(std::abs(x(pi) - 1) <= te.dx() / 2);
    CHECK(std::abs(x(pj) - 1) <= te.dx() / 2);
  }

  TEST_CASE("single jump tail values") {
    const double h = 0.05;
    const TailEstimate te = exact_estimate(jump_at(1, 1), h);
    CHECK(std::abs(tail_integral_estimate(te, 0.5, 0.5) - 1.0) <= bias_bound(h, 0.5, 0.5));
    CHECK(std::abs(tail_integral_estimate(te, 2.0, 0.5)) <= bias_bound(h, 2.0, 0.5));
    CHECK_THROWS(tail_integral_estimate(te, te.delta_floor() / 4, te.delta_floor() / 4));
    CHECK_THROWS(tail_integral_estimate(te, 2 * te.extent(), 1.0));

    const TailCurve curve = tail_curve(te, 1, 0.2);
    CHECK(curve.x(0) == 0.2);
    CHECK(curve.value.minCoeff() >= 0.0);
    CHECK(curve.value(0) == tail_integral_estimate(te, 0.2, 0.0));
    for (Eigen::Index i = 0; i < curve.x.size(); ++i) {
      // The kernel smears the unit step at x = 1 over a few multiples of h.
      if (curve.x(i) <= 0.6) CHECK(std::abs(curve.value(i) - 1.0) <= 0.1);
      if (curve.x(i) >= 1.4 && curve.x(i) < 5.0) CHECK(curve.value(i) <= 0.05);
    }
    CHECK_THROWS(tail_curve(te, 1, te.dx() / 4));
  }

  TEST_CASE("negative sums clip to zero") {
    const double h = 0.05;
    LogDerivGrid q = exact_q(jump_at(1, 1), h);
    q.q = -q.q;
    const TailEstimate te = smoothed_weighted_density(q, h);
    CHECK(te.raw(0.5, 0.5) == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(te.clipped(0.5, 0.5) == 0.0);
    CHECK(tail_integral_estimate(te, 0.5, 0.5) == 0.0);
  }

  TEST_CASE("x-space and u-space routes agree") {
    const double h = 0.1;
    const auto model = jump_at(1, 1);
    const TailEstimate te = exact_estimate(model, h);
    const Spectrum q = [&](double u1, double u2) {
      const ExponentDerivatives e = exponent_derivatives(model, {u1, u2});
      return e.d[0][3] + e.d[1][3];
    };
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(0.2, 0.9);
    for (int t = 0; t < 4; ++t) {
      const double a = coord(rng);
      const double b = coord(rng);
      const double direct = tail_integral_plancherel(q, h, a, b);
      CHECK(std::abs(te.raw(a, b) - direct) <= 1e-3 * std::abs(direct));
    }
  }

  TEST_CASE("transform of the tail indicator obeys the variation bound") {
    const Eigen::VectorXd v = symmetric_axis(0.7, 12);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    const auto g = [](double x1, double x2) { return 1.0 / (std::pow(x1, 4) + std::pow(x2, 4)); };
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.6, 1.3}}) {
      const double r2 = a * a + b * b;
      const double mass = g_transform(a, b, zero, zero)(0, 0).real();
      const double lambda_g = variation_constant(g, a, b);
      CHECK(mass <= 4 / r2);
      CHECK(lambda_g <= 8 / (r2 * r2));
      const Eigen::ArrayXXcd fg = g_transform(a, b, v, v);
      for (Eigen::Index i = 0; i < v.size(); ++i)
        for (Eigen::Index j = 0; j < v.size(); ++j) {
          const double uv = std::abs(v(i) * v(j));
          const double bound = uv > 0 ? std::min(lambda_g / uv, mass) : mass;
          CHECK(std::abs(fg(i, j)) <= bound * (1 + 1e-6));
        }
    }
  }

  TEST_CASE("shift covariance") {
    const double h = 0.1;
    const SpectralConfig cfg{512, 20.0};
    const TailEstimate base = exact_estimate(jump_at(1, 1), h, cfg);
    const double dx = base.dx();
    const int s1 = 12;
    const int s2 = 30;
    const Eigen::Vector2d y(1 + s1 * dx, 1 + s2 * dx);
    const TailEstimate shifted = exact_estimate(jump_at(y(0), y(1)), h, cfg);
    // q_x carries the weight x1^4 + x2^4 of the atom.
    const Eigen::ArrayXXd q0 = base.q_x() / 2;
    const Eigen::ArrayXXd q1 = shifted.q_x() / (std::pow(y(0), 4) + std::pow(y(1), 4));
    const double scale = q0.abs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index i = 0; i + s1 < q0.rows(); ++i)
      for (Eigen::Index j = 0; j + s2 < q0.cols(); ++j)
        worst = std::max(worst, std::abs(q1(i + s1, j + s2) - q0(i, j)));
    CHECK(worst <= 1e-9 * scale);
  }

  TEST_CASE("monotone tails for exact input") {
    const double h = 0.05;
    const TailEstimate te = exact_estimate(compensated_model(beta_family(0.5)), h);
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(11, 0.5, 3.0);
    for (Eigen::Index i = 0; i + 1 < grid.size(); ++i)
      for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const double slack = 2 * bias_bound(h, grid(i), grid(j));
        CHECK(te.raw(grid(i + 1), grid(j)) <= te.raw(grid(i), grid(j)) + slack);
        CHECK(te.raw(grid(j), grid(i + 1)) <= te.raw(grid(j), grid(i)) + slack);
      }
  }

  TEST_CASE("tail CSV") {
    const TailEstimate te = exact_estimate(jump_at(1, 1), 0.2, {256, 20.0});
    std::stringstream s;
    const Eigen::VectorXd ab = Eigen::VectorXd::LinSpaced(3, 0.5, 2.0);
    write_tail_csv(s, te, ab, ab);
    std::string line;
    int rows = 0;
    bool header = false;
    while (std::getline(s, line)) {
      if (line.rfind("a,b,", 0) == 0) header = true;
      else if (!line.empty() && line[0] != '#') ++rows;
    }
    CHECK(header);
    CHECK(rows == 9);
  }
}
