#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "levycop/charfn.hpp"
#include "levycop/logderiv.hpp"
#include "levycop/simulate.hpp"

using namespace levycop;

namespace {

using cd = std::complex<double>;

LevyModelSpec single_jump() { return cpp_model(point_masses({{Eigen::Vector2d(1.0, 1.0), 1.0}})); }

}  // namespace

TEST_SUITE("logderiv") {
  TEST_CASE("Gaussian part is removed") {
    Eigen::Matrix2d sigma;
    sigma << 1.0, 0.4, 0.4, 0.7;
    const Eigen::VectorXd axis = symmetric_axis(0.25, 20);
    const auto grid = exact_charfn(gaussian_model(sigma), axis, axis);
    for (int k = 1; k <= 2; ++k)
      CHECK(fourth_log_derivative(grid, k, 0.0).abs().maxCoeff() < 1e-10);
  }

  TEST_CASE("single jump closed form") {
    const Eigen::VectorXd axis = symmetric_axis(0.4, 15);
    const auto grid = exact_charfn(single_jump(), axis, axis);
    // Psi(u) = e^{i(u1 + u2)} - 1, so every fourth pure derivative is e^{i(u1 + u2)}.
    const Eigen::ArrayXXcd d1 = fourth_log_derivative(grid, 1, 0.0);
    for (Eigen::Index i = 0; i < axis.size(); ++i)
      for (Eigen::Index j = 0; j < axis.size(); ++j)
        CHECK(std::abs(d1(i, j) - std::exp(cd(0, axis(i) + axis(j)))) < 1e-9);
    CHECK(std::abs(d1(15, 15) - 1.0) < 1e-12);
  }

  TEST_CASE("value at the origin is the weighted mass") {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    const auto q = log_derivative_sum(exact_charfn(compensated_model(beta_family(0.5)), zero, zero), 0.0);
    CHECK(q.q(0, 0).real() == doctest::Approx(std::numbers::pi / 2 * std::tgamma(3.5)).epsilon(1e-9));
    CHECK(std::abs(q.q(0, 0).imag()) < 1e-12);
  }

  TEST_CASE("conditioning report") {
    const Eigen::VectorXd axis = symmetric_axis(0.25, 8);
    IncrementPanel origin;
    origin.n = 4;
    origin.z = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(4, 2);
    const auto flat = conditioning_report(ecf_grid(origin, axis, axis), 0.5, default_floor(4));
    CHECK(flat.min_modulus == 1.0);
    CHECK(flat.clipped_fraction == 0.0);
    CHECK(flat.well_conditioned);

    const auto cpp = cpp_model(point_masses({{{1.0, 1.0}, 1.2}, {{0.3, 2.0}, 0.8}}));
    const Eigen::VectorXd wide = symmetric_axis(0.1, 100);
    const auto exact = conditioning_report(exact_charfn(cpp, wide, wide), 0.1, 0.0);
    CHECK(exact.min_modulus >= std::exp(-2 * 2.0));

    // phi_n(u) = (1 + e^{i pi u1}) / 2 vanishes at u1 = 1.
    IncrementPanel wild;
    wild.n = 2;
    wild.z.resize(2, 2);
    wild.z << 0.0, 0.0, std::numbers::pi, 0.0;
    const auto bad = conditioning_report(ecf_grid(wild, axis, axis), 0.5, default_floor(2));
    CHECK(bad.min_modulus < 1e-12);
    CHECK(bad.clipped_fraction > 0.0);
    CHECK_FALSE(bad.well_conditioned);

    const auto q = log_derivative_sum(ecf_grid(wild, axis, axis), default_floor(2));
    CHECK(q.q.allFinite());
    CHECK(q.clipped_fraction > 0.0);
  }

  TEST_CASE("additivity under independence") {
    const Eigen::VectorXd axis = symmetric_axis(0.3, 12);
    const auto a = exact_charfn(single_jump(), axis, axis);
    const auto b = exact_charfn(compensated_model(beta_family(0.5)), axis, axis);
    const auto sum = log_derivative_sum(multiply(a, b), 0.0);
    const auto qa = log_derivative_sum(a, 0.0);
    const auto qb = log_derivative_sum(b, 0.0);
    CHECK((sum.q - qa.q - qb.q).abs().maxCoeff() < 1e-9);
  }

  TEST_CASE("Brownian invariance") {
    Eigen::Matrix2d sigma;
    sigma << 0.8, -0.3, -0.3, 0.5;
    const Eigen::VectorXd axis = symmetric_axis(0.3, 12);
    const auto jumps = exact_charfn(compensated_model(beta_family(1.5)), axis, axis);
    const auto with_bm = multiply(jumps, exact_charfn(gaussian_model(sigma), axis, axis));
    const auto q0 = log_derivative_sum(jumps, 0.0);
    const auto q1 = log_derivative_sum(with_bm, 0.0);
    CHECK((q1.q - q0.q).abs().maxCoeff() < 1e-9);
  }

  TEST_CASE("exact grids reproduce the weighted Fourier transform") {
    const auto nu = beta_family(0.5);
    const Eigen::VectorXd axis = symmetric_axis(1.5, 5);
    const auto q = log_derivative_sum(exact_charfn(compensated_model(nu), axis, axis), 0.0);
    const Eigen::ArrayXXcd oracle = weighted_fourier_transform(nu, axis, axis);
    const double scale = oracle.abs().maxCoeff();
    CHECK((q.q - oracle).abs().maxCoeff() <= 1e-7 * scale);
  }

  TEST_CASE("default floor") {
    CHECK(default_floor(10000) == doctest::Approx(0.01));
    CHECK(default_floor(10000, 3.0) == doctest::Approx(0.03));
    CHECK(default_floor(0) == 0.0);
  }
}
