#include <cmath>
#include <numbers>

#include <doctest.h>

#include "levycop/levy_model.hpp"

using namespace levycop;

namespace {

// Frozen against tail_integral_generic and tail_integral_cartesian.
constexpr double kBetaHalfTail11 = 0.063827278975111;
// Frozen against a bisection on tail_integral_generic(spec, x, 0).
constexpr double kCppLogMass = 5.87389736207287;
constexpr double kCppLogHalfMassInverse = 0.256423826212609;
// Frozen against U(U1^{-1}(1), U2^{-1}(1)) with the generic quadrature.
constexpr double kBetaHalfCopula11 = 0.50493727046222;

}  // namespace

TEST_SUITE("levy_model") {
  TEST_CASE("density formulas") {
    const auto nu = beta_family(0.5);
    CHECK(nu.profile(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(nu.weighted_density(0.6, 0.8) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(nu.density(1.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    const auto nu0 = beta_family(0.0);
    for (double r : {0.1, 1.0, 3.0})
      CHECK(nu0.profile(r) == doctest::Approx(r * r * std::exp(-r)).epsilon(1e-14));
  }

  TEST_CASE("cutoff plateau and support") {
    CHECK(smooth_cutoff(0.0) == 1.0);
    CHECK(smooth_cutoff(0.5) == 1.0);
    CHECK(smooth_cutoff(0.75) == 0.0);
    CHECK(smooth_cutoff(2.0) == 0.0);
    double prev = 1.0;
    for (double r = 0.5; r <= 0.75; r += 0.01) {
      CHECK(smooth_cutoff(r) <= prev);
      prev = smooth_cutoff(r);
    }
    const auto two = beta_two();
    CHECK(two.profile(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(two.profile(0.25) == doctest::Approx(1.0 / std::pow(std::log(0.25), 2)).epsilon(1e-14));
  }

  TEST_CASE("make_density rejects bad parameters") {
    CHECK_THROWS(beta_family(2.0));
    CHECK_THROWS(beta_family(-0.1));
    CHECK_THROWS(point_masses({{Eigen::Vector2d(1.0, 1.0), -1.0}}));
    CHECK_THROWS(point_masses({{Eigen::Vector2d(0.0, 0.0), 1.0}}));
  }

  TEST_CASE("single atom") {
    const auto atom = point_masses({{Eigen::Vector2d(1.0, 1.0), 1.0}});
    CHECK(total_mass(atom) == 1.0);
    CHECK(tail_integral_truth(atom, 0.5, 0.5) == 1.0);
    CHECK(tail_integral_truth(atom, 2.0, 0.5) == 0.0);
  }

  TEST_CASE("tail integral golden with independent oracles") {
    const auto nu = beta_family(0.5);
    CHECK(tail_integral_truth(nu, 1.0, 1.0) == doctest::Approx(kBetaHalfTail11).epsilon(1e-8));
    CHECK(tail_integral_generic(nu, 1.0, 1.0) == doctest::Approx(kBetaHalfTail11).epsilon(1e-8));
    const double coarse = tail_integral_cartesian(nu, 1.0, 1.0, 20);
    const double fine = tail_integral_cartesian(nu, 1.0, 1.0, 40);
    CHECK(std::abs(coarse - fine) < 1e-10);
    CHECK(fine == doctest::Approx(kBetaHalfTail11).epsilon(1e-8));
    CHECK_THROWS(tail_integral_truth(nu, 0.0, 0.0));
  }

  TEST_CASE("marginal inverse round trip") {
    const auto nu = beta_family(0.5);
    for (double u : {0.1, 1.0, 5.0}) {
      const double x = marginal_inverse_truth(nu, 1, u);
      CHECK(marginal_tail_truth(nu, 1, x) == doctest::Approx(u).epsilon(1e-7));
    }
    CHECK(marginal_inverse_truth(nu, 1, marginal_tail_truth(nu, 1, 1.0)) ==
          doctest::Approx(1.0).epsilon(1e-7));
    CHECK_THROWS(marginal_inverse_truth(nu, 1, -1.0));
  }

  TEST_CASE("cpp_log_density intensity and median jump size") {
    const auto nu = cpp_log_density();
    CHECK(nu.finite_activity());
    const double lambda = total_mass(nu);
    CHECK(lambda == doctest::Approx(kCppLogMass).epsilon(1e-9));
    const double x = marginal_inverse_truth(nu, 1, lambda / 2);
    CHECK(x == doctest::Approx(kCppLogHalfMassInverse).epsilon(1e-7));
    CHECK(tail_integral_generic(nu, x, 0.0) == doctest::Approx(lambda / 2).epsilon(1e-7));
    CHECK_THROWS(marginal_inverse_truth(nu, 1, 1.5 * lambda));
  }

  TEST_CASE("Levy copula of a diagonal family is the upper Frechet bound") {
    // Atoms of mass 0.1 on the diagonal: U(x, y) = U1(max(x, y)) and the
    // marginal is a step function, so the identity holds up to one step.
    std::vector<PointMass> atoms;
    for (int k = 1; k <= 50; ++k) atoms.push_back({Eigen::Vector2d(0.1 * k, 0.1 * k), 0.1});
    const auto truth = make_truth_tables(compensated_model(point_masses(atoms)));
    for (double u : {0.55, 1.25, 2.05, 4.45})
      for (double v : {0.35, 1.25, 3.15})
        CHECK(std::abs(truth.copula(u, v) - std::min(u, v)) <= 0.1 + 1e-12);
  }

  TEST_CASE("copula of a product jump law is the independence copula") {
    const auto f = [](double x1, double x2) {
      return std::exp(-x1 - x2) * (std::pow(x1, 4) + std::pow(x2, 4));
    };
    const auto model = cpp_model(custom_density(f, "product"));
    REQUIRE(uses_cpp_copula(model));
    for (double u : {0.2, 0.5, 0.8})
      for (double v : {0.3, 0.6})
        CHECK(copula_truth(model, u, v, 1e-8) == doctest::Approx(u * v).epsilon(1e-6));
  }

  TEST_CASE("Levy copula golden") {
    const auto model = compensated_model(beta_family(0.5));
    CHECK(copula_truth(model, 1.0, 1.0, 1e-6) == doctest::Approx(kBetaHalfCopula11).epsilon(1e-6));
  }

  TEST_CASE("monotone tails dominated by the marginals") {
    for (const auto& nu : {beta_family(0.5), beta_family(1.5), beta_two(), cpp_log_density()}) {
      const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(10, 0.1, 3.0);
      Eigen::MatrixXd u(10, 10);
      for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) u(i, j) = tail_integral_truth(nu, grid(i), grid(j));
      for (int i = 0; i < 10; ++i) {
        const double u1 = marginal_tail_truth(nu, 1, grid(i));
        for (int j = 0; j < 10; ++j) {
          if (i + 1 < 10) CHECK(u(i + 1, j) <= u(i, j) * (1 + 1e-8));
          if (j + 1 < 10) CHECK(u(i, j + 1) <= u(i, j) * (1 + 1e-8));
          CHECK(u(i, j) <= u1 * (1 + 1e-8));
          CHECK(u(i, j) <= marginal_tail_truth(nu, 2, grid(j)) * (1 + 1e-8));
        }
      }
    }
  }

  TEST_CASE("marginals are the axis values of the tail") {
    const auto nu = beta_two();
    for (double x : {0.2, 1.0, 2.5}) {
      CHECK(tail_integral_truth(nu, x, 0.0) == doctest::Approx(marginal_tail_truth(nu, 1, x)));
      CHECK(tail_integral_truth(nu, 0.0, x) == doctest::Approx(marginal_tail_truth(nu, 2, x)));
    }
  }

  TEST_CASE("copula Lipschitz property") {
    const double tol = 1e-7;
    const auto check = [&](const TruthTables& truth, const Eigen::VectorXd& grid) {
      Eigen::MatrixXd c(grid.size(), grid.size());
      for (Eigen::Index i = 0; i < grid.size(); ++i)
        for (Eigen::Index j = 0; j < grid.size(); ++j) c(i, j) = truth.copula(grid(i), grid(j));
      for (Eigen::Index i = 0; i < grid.size(); ++i)
        for (Eigen::Index j = 0; j < grid.size(); ++j)
          for (Eigen::Index k = 0; k < grid.size(); ++k)
            for (Eigen::Index l = 0; l < grid.size(); ++l)
              CHECK(std::abs(c(i, j) - c(k, l)) <=
                    std::abs(grid(i) - grid(k)) + std::abs(grid(j) - grid(l)) + 2 * tol);
      return c;
    };
    const auto levy = make_truth_tables(compensated_model(beta_family(0.5)), 1e-9);
    check(levy, Eigen::VectorXd::LinSpaced(4, 0.5, 2.0));

    const auto cpp = make_truth_tables(cpp_model(cpp_log_density()), 1e-9);
    const Eigen::MatrixXd c = check(cpp, Eigen::VectorXd::LinSpaced(4, 0.2, 0.8));
    CHECK(c.minCoeff() >= 0.0);
    CHECK(c.maxCoeff() <= 1.0);
  }

  TEST_CASE("Blumenthal-Getoor index") {
    CHECK(std::abs(blumenthal_getoor_estimate(beta_family(0.5)) - 0.5) < 0.1);
    CHECK(std::abs(blumenthal_getoor_estimate(beta_family(1.5)) - 1.5) < 0.1);
  }

  TEST_CASE("Fourier decay sweep") {
    const auto nu = beta_family(0.5);
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(11, -50.0, 50.0);
    const DecayReport report = check_fourier_decay(nu, grid, grid);
    // The sup of |F f|(u)(1+|u1|)(1+|u2|) is attained at u = 0, where it is
    // int f = (pi / 2) Gamma(3.5).
    const double mass = std::numbers::pi / 2 * std::tgamma(3.5);
    CHECK(report.c_estimate == doctest::Approx(mass).epsilon(1e-8));
    CHECK(report.worst_u.norm() == 0.0);
    CHECK(std::isfinite(report.lambda_g));
    CHECK_THROWS(check_fourier_decay(point_masses({{Eigen::Vector2d(1, 1), 1.0}}), grid, grid));
  }

  TEST_CASE("mixed variation of the quartic weight") {
    const auto g = [](double x1, double x2) { return 1.0 / (std::pow(x1, 4) + std::pow(x2, 4)); };
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.8, 1.5}})
      CHECK(mixed_variation(g, a, b) ==
            doctest::Approx(1.0 / (std::pow(a, 4) + std::pow(b, 4))).epsilon(1e-4));
  }

  TEST_CASE("eta weighting") {
    CHECK(eta(0.3, 0.4) == doctest::Approx(std::pow(0.5, 4)));
    CHECK(eta(3.0, 4.0) == doctest::Approx(25.0));
    CHECK(eta(1.0, 0.0) == 1.0);
  }

  TEST_CASE("model validation") {
    Eigen::Matrix2d bad;
    bad << 1, 0.5, 0, 1;
    CHECK_THROWS(validate(compensated_model(beta_family(0.5), bad)));
    auto model = cpp_model(cpp_log_density());
    model.sigma = Eigen::Matrix2d::Identity();
    CHECK_THROWS(validate(model));
    CHECK_THROWS(validate(cpp_model(beta_family(0.5))));
  }
}
