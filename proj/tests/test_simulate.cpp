#include <cmath>
#include <complex>
#include <sstream>

#include <doctest.h>

#include "levycop/charfn.hpp"
#include "levycop/simulate.hpp"

using namespace levycop;

namespace {

using cd = std::complex<double>;

Eigen::Vector2d column_mean(const IncrementPanel& p) { return p.z.colwise().mean().transpose(); }

// Sample mean of z_k^power and its standard error.
std::pair<double, double> moment(const IncrementPanel& p, int k, int power) {
  const Eigen::ArrayXd v = p.z.col(k).array().pow(power);
  const double mean = v.mean();
  const double sd = std::sqrt((v - mean).square().sum() / (v.size() - 1));
  return {mean, sd / std::sqrt(static_cast<double>(v.size()))};
}

LevyModelSpec single_jump() { return cpp_model(point_masses({{Eigen::Vector2d(1.0, 1.0), 1.0}})); }

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("Poisson jump count") {
    // Every jump adds 1 to the first coordinate, so z1 counts jumps.
    const auto model = cpp_model(point_masses({{Eigen::Vector2d(1.0, 0.0), 2.0}}));
    const long n = 100000;
    const auto panel = sample_increments(model, n, 1);
    REQUIRE(panel.z.rows() == n);
    CHECK(std::abs(panel.z.col(0).mean() - 2.0) <= 3 * std::sqrt(2.0 / n));
    CHECK(panel.z.col(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(panel.approximation_epsilon == 0.0);
  }

  TEST_CASE("single jump mean") {
    const long n = 100000;
    const auto panel = sample_increments(single_jump(), n, 2);
    const Eigen::Vector2d m = column_mean(panel);
    CHECK(std::abs(m(0) - 1.0) <= 3 / std::sqrt(double(n)));
    CHECK(std::abs(m(1) - 1.0) <= 3 / std::sqrt(double(n)));
  }

  TEST_CASE("compensated model is centered at the drift") {
    const long n = 100000;
    const auto panel = sample_increments(compensated_model(beta_family(0.5)), n, 3);
    for (int k = 0; k < 2; ++k) {
      const auto [mean, se] = moment(panel, k, 1);
      CHECK(std::abs(mean) <= 3 * se);
    }
    CHECK(panel.z.allFinite());
    CHECK(panel.approximation_epsilon == kDefaultSmallJumpCutoff);
  }

  TEST_CASE("determinism") {
    const auto model = compensated_model(beta_family(1.5), Eigen::Matrix2d::Identity());
    const SimulationOptions opts{.epsilon = 0.01};
    const auto a = sample_increments(model, 500, 42, opts);
    const auto b = sample_increments(model, 500, 42, opts);
    const auto c = sample_increments(model, 500, 43, opts);
    CHECK((a.z.array() == b.z.array()).all());
    CHECK_FALSE((a.z.array() == c.z.array()).all());
    CHECK(replication_seed(7, 3) == replication_seed(7, 3));
    CHECK(replication_seed(7, 3) != replication_seed(7, 4));
    CHECK(replication_seed(7, 3) != replication_seed(8, 3));
  }

  TEST_CASE("rejects bad input") {
    CHECK_THROWS(sample_increments(single_jump(), 0, 1));
    CHECK_THROWS(sample_increments(compensated_model(beta_family(0.5)), 10, 1,
                                   SimulationOptions{.epsilon = 0.0}));
  }

  TEST_CASE("exact characteristic function identities") {
    const Eigen::VectorXd u1 = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
    const auto gauss = exact_charfn(gaussian_model(Eigen::Matrix2d::Identity()), u1, u1);
    CHECK(std::abs(gauss.phi(4, 2) - std::exp(-0.5)) < 1e-14);

    const Eigen::VectorXd wide = Eigen::VectorXd::LinSpaced(41, -20.0, 20.0);
    const auto jump = exact_charfn(single_jump(), wide, wide);
    CHECK(jump.phi.abs().minCoeff() >= std::exp(-2.0) - 1e-14);
    for (Eigen::Index i = 0; i < wide.size(); ++i)
      for (Eigen::Index j = 0; j < wide.size(); ++j) {
        const cd expected = std::exp(std::exp(cd(0, wide(i) + wide(j))) - 1.0);
        CHECK(std::abs(jump.phi(i, j) - expected) < 1e-12);
      }

    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    auto drifted = compensated_model(beta_family(0.5), Eigen::Matrix2d::Zero(), {0.3, -0.2});
    const auto at0 = exact_charfn(drifted, zero, zero);
    CHECK(std::abs(at0.phi(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(at0.at(1, 1)(0, 0) - cd(0, 0.3)) < 1e-12);
    CHECK(std::abs(at0.at(1, 2)(0, 0) - cd(0, -0.2)) < 1e-12);
    const auto j0 = exact_charfn(single_jump(), zero, zero);
    CHECK(std::abs(j0.at(1, 1)(0, 0) - cd(0, 1.0)) < 1e-14);
  }

  TEST_CASE("sample moments match exact derivatives at zero") {
    const long n = 100000;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    for (const auto& model : {single_jump(), compensated_model(beta_family(0.5))}) {
      const auto panel = sample_increments(model, n, 5);
      const auto exact = exact_charfn(model, zero, zero);
      for (int k = 0; k < 2; ++k) {
        // E z^l = (-i)^l d^l phi(0).
        const double mean = (cd(0, -1) * exact.at(1, k + 1)(0, 0)).real();
        const double second = -exact.at(2, k + 1)(0, 0).real();
        const double fourth = exact.at(4, k + 1)(0, 0).real();
        const auto [m1, s1] = moment(panel, k, 1);
        const auto [m2, s2] = moment(panel, k, 2);
        const auto [m4, s4] = moment(panel, k, 4);
        CHECK(std::abs(m1 - mean) <= 4 * s1);
        CHECK(std::abs(m2 - second) <= 4 * s2);
        CHECK(std::abs(m4 - fourth) <= 4 * s4);
      }
    }
  }

  TEST_CASE("empirical characteristic function of a large panel") {
    const long n = 40000;
    const auto model = compensated_model(beta_family(1.5), 0.5 * Eigen::Matrix2d::Identity());
    // The Gaussian substitute matches covariances, so a coarse cutoff only
    // perturbs phi at order int_{|x| < eps} |x|^4 nu(dx).
    const auto panel = sample_increments(model, n, 9, {.epsilon = 0.02});
    const Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(7, -3.0, 3.0);
    const auto ecf = ecf_grid(panel, axis, axis, EcfMethod::direct);
    const auto exact = exact_charfn(model, axis, axis);
    CHECK((ecf.phi - exact.phi).abs().maxCoeff() <= 5 / std::sqrt(double(n)));
  }

  TEST_CASE("small-jump substitute") {
    const auto nu = beta_family(0.5);
    const auto model = compensated_model(nu);
    const double eps = 1e-2;
    const IncrementSampler coarse(model, {.epsilon = eps});
    const IncrementSampler fine(model, {.epsilon = eps / 2});
    // Halving the cutoff moves exactly int_{eps/2 < |x| <= eps} x x^T nu(dx)
    // from the Gaussian substitute into the jumps.
    const double band = angular_moment(0, 0) * radial_moment(nu, 2.0, eps / 2, eps);
    const double moved = coarse.gaussian_covariance().trace() - fine.gaussian_covariance().trace();
    CHECK(moved == doctest::Approx(band).epsilon(1e-6));
    CHECK(fine.jump_rate() > coarse.jump_rate());

    // Either cutoff keeps the total variance int |x|^2 nu(dx).
    const double total = angular_moment(0, 0) * radial_moment(nu, 2.0, 0.0, kInfinity);
    for (const auto* sampler : {&coarse, &fine}) {
      const auto panel = sampler->sample(100000, 11);
      const auto [m1, s1] = moment(panel, 0, 2);
      const auto [m2, s2] = moment(panel, 1, 2);
      CHECK(std::abs(m1 + m2 - total) <= 4 * std::hypot(s1, s2));
    }
  }

  TEST_CASE("panel CSV round trip") {
    const auto panel = sample_increments(compensated_model(beta_family(0.5)), 50, 17);
    std::stringstream s;
    write_panel_csv(s, panel);
    const auto back = read_panel_csv(s);
    CHECK(back.n == panel.n);
    CHECK(back.seed == panel.seed);
    CHECK(back.model_label == panel.model_label);
    CHECK(back.approximation_epsilon == panel.approximation_epsilon);
    CHECK((back.z.array() == panel.z.array()).all());
  }
}
