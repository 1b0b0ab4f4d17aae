#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace levycop {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class DensityKind { beta_family, beta_two, cpp_log_density, point_masses, custom };

struct PointMass {
  Eigen::Vector2d location;
  double weight;
};

using PlaneFunction = std::function<double(double, double)>;

//! Jump measure on the positive quadrant. Density kinds have the form
//! nu(dx) = f(x) / (x1^4 + x2^4) dx; point masses are finite sums of atoms.
//!
//! For the radial kinds nu factorizes in polar coordinates as
//! angular_weight(theta) dtheta * radial_density(r) dr.
struct JumpDensitySpec {
  DensityKind kind = DensityKind::beta_family;
  double beta = 0.5;
  std::vector<PointMass> atoms;
  PlaneFunction custom_f;
  std::string label;

  bool is_radial() const;
  bool has_density() const { return kind != DensityKind::point_masses; }
  bool finite_activity() const;

  //! f as a function of r = |x| (radial kinds only).
  double profile(double r) const;
  //! f(x) on the closed quadrant.
  double weighted_density(double x1, double x2) const;
  //! f(x) / (x1^4 + x2^4).
  double density(double x1, double x2) const;
  //! profile(r) / r^3.
  double radial_density(double r) const;
};

//! Smooth bump: 1 on r <= 1/2, 0 on r >= 3/4, exp(-1/t) transition.
double smooth_cutoff(double r);

//! 1 / (cos^4 + sin^4).
double angular_weight(double theta);

struct DensityParams {
  double beta = 0.5;
  std::vector<PointMass> atoms;
  PlaneFunction custom_f;
  std::string label;
};

JumpDensitySpec make_density(DensityKind kind, const DensityParams& params = {});
JumpDensitySpec beta_family(double beta);
JumpDensitySpec beta_two();
JumpDensitySpec cpp_log_density();
JumpDensitySpec point_masses(std::vector<PointMass> atoms);
JumpDensitySpec custom_density(PlaneFunction f, std::string label);

std::string to_string(DensityKind kind);
DensityKind density_kind_from_string(const std::string& name);

enum class Representation { compensated, uncompensated };

struct LevyModelSpec {
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
  JumpDensitySpec jumps;
  Eigen::Vector2d alpha = Eigen::Vector2d::Zero();
  Representation representation = Representation::compensated;
  double intensity = kInfinity;
  std::string label;
};

//! Compensated triplet (Sigma, nu, alpha).
LevyModelSpec compensated_model(JumpDensitySpec jumps,
                                const Eigen::Matrix2d& sigma = Eigen::Matrix2d::Zero(),
                                const Eigen::Vector2d& alpha = Eigen::Vector2d::Zero());
//! Compound Poisson model, exponent i<u,alpha> + int (e^{i<u,x>} - 1) nu(dx).
LevyModelSpec cpp_model(JumpDensitySpec jumps,
                        const Eigen::Vector2d& alpha = Eigen::Vector2d::Zero());
//! Brownian motion with covariance sigma and no jumps.
LevyModelSpec gaussian_model(const Eigen::Matrix2d& sigma);

void validate(const LevyModelSpec& model);

// ---------------------------------------------------------------------------
// Ground truth by quadrature.

inline constexpr double kTruthTolerance = 1e-8;

//! nu(R^2); infinite for infinite-activity kinds.
double total_mass(const JumpDensitySpec& spec, double tol = 1e-11);

//! H(rho) = int_rho^inf radial_density(r) dr (radial kinds).
double radial_tail(const JumpDensitySpec& spec, double rho, double tol = 1e-11);

//! int_lo^hi r^p radial_density(r) dr (radial kinds).
double radial_moment(const JumpDensitySpec& spec, double p, double lo, double hi,
                     double tol = 1e-11);

//! int_0^{pi/2} angular_weight(theta) cos^i sin^j dtheta.
double angular_moment(int i, int j);

//! U(a, b) = nu([a, inf) x [b, inf)).
double tail_integral_truth(const JumpDensitySpec& spec, double a, double b,
                           double tol = kTruthTolerance);

//! Same quantity by iterated 2-D polar quadrature without the radial
//! factorization; used as an independent cross-check.
double tail_integral_generic(const JumpDensitySpec& spec, double a, double b,
                             double tol = kTruthTolerance);

//! Same quantity by a fixed composite Gauss-Legendre Cartesian rule with
//! `panels_per_unit` panels per unit length; halving the mesh gives the
//! self-consistency check.
double tail_integral_cartesian(const JumpDensitySpec& spec, double a, double b,
                               int panels_per_unit, double radius = 40.0);

//! U_k(x): U(x, 0) for k = 1, U(0, x) for k = 2.
double marginal_tail_truth(const JumpDensitySpec& spec, int k, double x,
                           double tol = kTruthTolerance);

//! x with U_k(x) = u by bracketing root search.
double marginal_inverse_truth(const JumpDensitySpec& spec, int k, double u,
                              double tol = kTruthTolerance);

//! Levy copula U(U1^{-1}(u), U2^{-1}(v)) for compensated models, ordinary
//! copula M(V1^{-1}(u), V2^{-1}(v)) of the jump law for compound Poisson models.
double copula_truth(const LevyModelSpec& model, double u, double v,
                    double tol = 1e-9);

//! Copula regime implied by the representation.
bool uses_cpp_copula(const LevyModelSpec& model);

struct TruthTables {
  std::function<double(double, double)> U;
  std::function<double(double)> U1;
  std::function<double(double)> U2;
  std::function<double(double, double)> copula;
  double quadrature_tol = kTruthTolerance;
};

TruthTables make_truth_tables(const LevyModelSpec& model, double tol = kTruthTolerance);

//! eta(a, b) = min(|(a,b)|^2, |(a,b)|^4).
double eta(double a, double b);

//! F((x1^4 + x2^4) nu)(u) = int e^{i<u,x>} f(x) dx by Cartesian quadrature.
Eigen::ArrayXXcd weighted_fourier_transform(const JumpDensitySpec& spec,
                                            const Eigen::VectorXd& u1,
                                            const Eigen::VectorXd& u2);

//! Mixed-derivative total variation int int |d^2 g / dx1 dx2| over
//! [a, inf) x [b, inf), derivatives by central differences.
double mixed_variation(const PlaneFunction& g, double a, double b,
                       double radius = 60.0);

//! Variation constant |g(a,b)| + int |d1 g|(x1, b) + int |d2 g|(a, x2) + mixed term.
double variation_constant(const PlaneFunction& g, double a, double b,
                         double radius = 60.0);

struct DecayReport {
  double c_estimate = 0.0;
  Eigen::Vector2d worst_u = Eigen::Vector2d::Zero();
  double lambda_g = 0.0;
};

//! max of |F((x1^4+x2^4) nu)|(u) (1+|u1|)(1+|u2|) over the grid, plus the
//! variation constant of f on the quadrant.
DecayReport check_fourier_decay(const JumpDensitySpec& spec, const Eigen::VectorXd& u1,
                                const Eigen::VectorXd& u2);

//! Blumenthal-Getoor index from the growth of nu({eps < |x| < 1}) as eps -> 0.
double blumenthal_getoor_estimate(const JumpDensitySpec& spec, double eps_small = 1e-7,
                                  double eps_large = 1e-5);

}  // namespace levycop
