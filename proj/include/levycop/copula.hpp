#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "levycop/inversion.hpp"
#include "levycop/levy_model.hpp"
#include "levycop/spectral.hpp"

namespace levycop {

//! delta_n = multiplier / loglog(n) (general) or multiplier / log(n) (cpp).
double offset_delta(long n, Regime regime, double multiplier = 1.0);

//! `count` equally spaced points on [lo, hi].
Eigen::VectorXd ladder(double lo, double hi, int count);

enum CellFlag : unsigned {
  kCellOk = 0,
  kInverseOutOfRange = 1u << 0,
  kIllConditioned = 1u << 1,
  kOutsideUnitInterval = 1u << 2,
};

struct CopulaSurface {
  Eigen::VectorXd u_values;
  Eigen::VectorXd v_values;
  Eigen::ArrayXXd values;
  Eigen::Array<unsigned, Eigen::Dynamic, Eigen::Dynamic> flags;
  Regime regime = Regime::general;
  double delta_n = 0.0;
  // Metadata for the CSV header.
  long n = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
  std::string model_label;

  int flagged_cells() const;
};

//! Tail function with sampled marginal curves starting at delta; either an
//! estimate or, for plug-through checks, the truth.
struct TailSource {
  std::function<double(double, double)> tail;
  TailCurve curve1;
  TailCurve curve2;
  bool well_conditioned = true;
};

TailSource estimate_source(const TailEstimate& te, double delta);

//! Truth tables sampled on {delta} and the multiples of `spacing` above delta up to `top`.
TailSource truth_source(const TruthTables& truth, double delta, double spacing, double top);

//! U(U1^{-1}(u), U2^{-1}(v)) with the inverses from the running-infimum envelopes.
CopulaSurface levy_copula_surface(const TailSource& source, double delta_n,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& v);

//! 1 + (N(a,b) - N(a,0) - N(0,b)) / lambda at a = V1^{-1}(u) = U1^{-1}(lambda (1 - u)).
CopulaSurface cpp_copula_surface(const TailSource& source, double lambda, double delta_n,
                                 const Eigen::VectorXd& u, const Eigen::VectorXd& v);

//! Levy copula from a tail estimate with delta_n = offset_delta(n, general, delta_mult).
CopulaSurface levy_copula_estimate(const TailEstimate& te, long n, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v, double delta_mult = 1.0);

//! Copula of the jump law for a compound Poisson model with known intensity.
CopulaSurface cpp_copula_estimate(const TailEstimate& te, double lambda, long n,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                  double delta_mult = 1.0);

//! Sup over the surface of |values - truth(u, v)|.
double copula_sup_error(const CopulaSurface& surface,
                        const std::function<double(double, double)>& truth);

//! CSV (u, v, value, flag) with '#' metadata lines.
void write_surface_csv(std::ostream& out, const CopulaSurface& surface);

}  // namespace levycop
