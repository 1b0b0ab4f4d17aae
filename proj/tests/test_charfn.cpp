#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include <doctest.h>

#include "levycop/charfn.hpp"
#include "levycop/simulate.hpp"

using namespace levycop;

namespace {

using cd = std::complex<double>;

IncrementPanel panel_of(std::vector<Eigen::Vector2d> points) {
  IncrementPanel p;
  p.n = static_cast<long>(points.size());
  p.z.resize(p.n, 2);
  for (long t = 0; t < p.n; ++t) p.z.row(t) = points[t].transpose();
  return p;
}

// Standard Gaussian grid with derivatives from the Hermite recursion.
CharFnGrid gaussian_grid(const Eigen::VectorXd& axis) {
  CharFnGrid g(axis, axis);
  for (Eigen::Index i = 0; i < axis.size(); ++i)
    for (Eigen::Index j = 0; j < axis.size(); ++j) {
      const double phi = std::exp(-0.5 * (axis(i) * axis(i) + axis(j) * axis(j)));
      g.phi(i, j) = phi;
      for (int k = 1; k <= 2; ++k) {
        const double u = k == 1 ? axis(i) : axis(j);
        g.at(1, k)(i, j) = -u * phi;
        g.at(2, k)(i, j) = (u * u - 1) * phi;
        g.at(3, k)(i, j) = (3 * u - u * u * u) * phi;
        g.at(4, k)(i, j) = (u * u * u * u - 6 * u * u + 3) * phi;
      }
    }
  return g;
}

}  // namespace

TEST_SUITE("charfn") {
  TEST_CASE("panel at the origin") {
    const auto ecf = ecf_grid(panel_of({{0, 0}}), symmetric_axis(0.5, 4), symmetric_axis(0.5, 4));
    CHECK((ecf.phi - cd(1, 0)).abs().maxCoeff() == 0.0);
    for (int k = 1; k <= 2; ++k)
      for (int l = 1; l <= 4; ++l) CHECK(ecf.at(l, k).abs().maxCoeff() == 0.0);
    CHECK(ecf.n == 1);
  }

  TEST_CASE("two-point symmetric panel") {
    const Eigen::VectorXd axis = symmetric_axis(0.3, 6);
    const auto ecf = ecf_grid(panel_of({{1, 0}, {-1, 0}}), axis, axis);
    for (Eigen::Index i = 0; i < axis.size(); ++i)
      for (Eigen::Index j = 0; j < axis.size(); ++j) {
        CHECK(std::abs(ecf.phi(i, j) - std::cos(axis(i))) < 1e-15);
        CHECK(std::abs(ecf.at(2, 1)(i, j) + std::cos(axis(i))) < 1e-15);
      }
  }

  TEST_CASE("single point fourth derivative") {
    const Eigen::VectorXd axis = symmetric_axis(0.7, 5);
    const auto ecf = ecf_grid(panel_of({{1, 1}}), axis, axis);
    for (Eigen::Index i = 0; i < axis.size(); ++i)
      for (Eigen::Index j = 0; j < axis.size(); ++j)
        CHECK(std::abs(ecf.at(4, 2)(i, j) - std::exp(cd(0, axis(i) + axis(j)))) < 1e-14);
  }

  TEST_CASE("weight function") {
    CHECK(weight(Eigen::Vector2d::Zero(), 0.25) == 1.0);
    CHECK(weight(Eigen::Vector2d::Zero(), 3.0) == 1.0);
    CHECK(weight({10, 0}, 0.25) < weight({1, 0}, 0.25));
    CHECK(weight({3, 4}, 0.25) == doctest::Approx(std::pow(std::log(std::exp(1.0) + 5), -0.75)));
    CHECK(WeightedMetricConfig{}.delta_exponent == 0.25);
  }

  TEST_CASE("weighted sup distance") {
    const Eigen::VectorXd axis = symmetric_axis(0.25, 16);
    const auto exact = exact_charfn(gaussian_model(Eigen::Matrix2d::Identity()), axis, axis);
    CHECK(weighted_sup_distance(exact, exact) == 0.0);
    CHECK(weighted_sup_distance(exact, gaussian_grid(axis)) < 1e-12);

    const auto model = gaussian_model(Eigen::Matrix2d::Identity());
    const auto distance = [&](long n) {
      return weighted_sup_distance(ecf_grid(sample_increments(model, n, 3), axis, axis), exact);
    };
    const double small = distance(1000);
    const double large = distance(64000);
    CHECK(small > 0.0);
    CHECK(large < small / 2);
    CHECK_THROWS(weighted_sup_distance(exact, exact_charfn(model, symmetric_axis(0.5, 16), axis)));
  }

  TEST_CASE("derivative consistency with central differences") {
    const auto model = compensated_model(beta_family(1.0), 0.2 * Eigen::Matrix2d::Identity());
    const auto panel = sample_increments(model, 300, 21, {.epsilon = 0.01});
    const double du = 0.01;
    const Eigen::VectorXd axis = symmetric_axis(du, 100);
    const auto ecf = ecf_grid(panel, axis, axis, EcfMethod::direct);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> pick(1, static_cast<int>(axis.size()) - 2);
    for (int trial = 0; trial < 100; ++trial) {
      const int i = pick(rng);
      const int j = pick(rng);
      for (int k = 1; k <= 2; ++k) {
        // |d^m phi_n| <= mean |z_k|^m bounds the third derivative in the
        // central-difference remainder du^2 / 6 f'''.
        const Eigen::ArrayXd z = panel.z.col(k - 1).array().abs();
        for (int l = 1; l <= 4; ++l) {
          const auto& lower = ecf.at(l - 1, k);
          const cd diff = k == 1 ? (lower(i + 1, j) - lower(i - 1, j)) / (2 * du)
                                 : (lower(i, j + 1) - lower(i, j - 1)) / (2 * du);
          const double bound = du * du / 6 * z.pow(l + 2).mean() + 1e-9;
          CHECK(std::abs(diff - ecf.at(l, k)(i, j)) <= bound);
        }
      }
    }
  }

  TEST_CASE("normalization and conjugate symmetry") {
    const auto panel = sample_increments(compensated_model(beta_family(0.5)), 1000, 4);
    const Eigen::VectorXd axis = symmetric_axis(0.37, 20);
    const auto ecf = ecf_grid(panel, axis, axis);
    CHECK(ecf.phi(20, 20) == cd(1, 0));
    CHECK(ecf.phi.abs().maxCoeff() <= 1 + 1e-12);
    const Eigen::Index m = axis.size() - 1;
    for (Eigen::Index i = 0; i <= m; ++i)
      for (Eigen::Index j = 0; j <= m; ++j)
        CHECK(std::abs(ecf.phi(m - i, m - j) - std::conj(ecf.phi(i, j))) < 1e-12);
  }

  TEST_CASE("accelerated path agrees with the direct sum") {
    const auto model = compensated_model(beta_family(1.0), Eigen::Matrix2d::Identity());
    const auto panel = sample_increments(model, 3000, 6, {.epsilon = 0.01});
    const Eigen::VectorXd axis = symmetric_axis(0.05, 60);
    const auto direct = ecf_grid(panel, axis, axis, EcfMethod::direct);
    const auto fast = ecf_grid(panel, axis, axis, EcfMethod::nufft);
    for (int l = 0; l <= 4; ++l)
      for (int k = 1; k <= 2; ++k) {
        const double scale = std::max(1.0, direct.at(l, k).abs().maxCoeff());
        CHECK((direct.at(l, k) - fast.at(l, k)).abs().maxCoeff() <= 1e-10 * scale);
      }
  }

  TEST_CASE("rejects empty panels") {
    IncrementPanel empty;
    CHECK_THROWS(ecf_grid(empty, symmetric_axis(0.1, 2), symmetric_axis(0.1, 2)));
  }

  TEST_CASE("binary dump round trip") {
    const auto panel = sample_increments(cpp_model(point_masses({{{1.0, 2.0}, 1.5}})), 100, 8);
    const auto ecf = ecf_grid(panel, symmetric_axis(0.2, 3), symmetric_axis(0.3, 4));
    std::stringstream s;
    write_grid_binary(s, ecf);
    const auto back = read_grid_binary(s);
    CHECK(back.same_axes(ecf));
    CHECK(back.n == ecf.n);
    for (int l = 0; l <= 4; ++l)
      for (int k = 1; k <= 2; ++k) CHECK((back.at(l, k) == ecf.at(l, k)).all());
  }
}
