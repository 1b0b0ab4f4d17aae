#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>

#include <Eigen/Core>

#include "levycop/charfn.hpp"
#include "levycop/levy_model.hpp"

namespace levycop {

//! n unit-time increments Z_t = X_t - X_{t-1}, one per row.
struct IncrementPanel {
  Eigen::Matrix<double, Eigen::Dynamic, 2> z;
  long n = 0;
  std::uint64_t seed = 0;
  std::string model_label;
  double approximation_epsilon = 0.0;
};

//! Generator for replication `index` under `master_seed`; streams for distinct
//! indices are derived independently of evaluation order.
std::mt19937_64 replication_stream(std::uint64_t master_seed, std::uint64_t index);

//! Seed recorded on a panel for replication `index`.
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t index);

inline constexpr double kDefaultSmallJumpCutoff = 1e-3;

struct SimulationOptions {
  double epsilon = kDefaultSmallJumpCutoff;  //!< small-jump cutoff (compensated, infinite activity)
};

//! Draws i.i.d. increments. Compound Poisson models are sampled exactly;
//! infinite-activity models keep jumps with |x| > epsilon, add the compensator
//! drift and a Gaussian substitute for the small jumps.
IncrementPanel sample_increments(const LevyModelSpec& model, long n, std::uint64_t seed,
                                 const SimulationOptions& opts = {});

//! Reusable sampler (precomputed envelopes and masses).
class IncrementSampler {
 public:
  IncrementSampler(const LevyModelSpec& model, const SimulationOptions& opts = {});
  ~IncrementSampler();
  IncrementSampler(IncrementSampler&&) noexcept;
  IncrementSampler& operator=(IncrementSampler&&) noexcept;

  IncrementPanel sample(long n, std::uint64_t seed) const;
  //! Rate of the simulated big-jump Poisson process.
  double jump_rate() const;
  //! Drift added per unit time (alpha minus compensator).
  Eigen::Vector2d drift() const;
  //! Covariance of the Gaussian part (Sigma plus small-jump substitute).
  Eigen::Matrix2d gaussian_covariance() const;
  //! One jump from the normalized big-jump law.
  Eigen::Vector2d draw_jump(std::mt19937_64& rng) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

//! Exact phi and derivatives from the characteristic exponent:
//! phi' = phi Psi', phi'' = phi (Psi'' + Psi'^2), ... up to order four.
CharFnGrid exact_charfn(const LevyModelSpec& model, const Eigen::VectorXd& u1,
                        const Eigen::VectorXd& u2);

//! Derivatives of the characteristic exponent at one point:
//! psi[0] = Psi(u), psi[l][k] = d^l Psi / du_k^l.
struct ExponentDerivatives {
  std::complex<double> value;
  std::array<std::array<std::complex<double>, 4>, 2> d;
};
ExponentDerivatives exponent_derivatives(const LevyModelSpec& model, const Eigen::Vector2d& u);

//! Panel CSV with '#' header lines carrying label, seed and epsilon.
void write_panel_csv(std::ostream& out, const IncrementPanel& panel);
IncrementPanel read_panel_csv(std::istream& in);

}  // namespace levycop
