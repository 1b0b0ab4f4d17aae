#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace levycop {

//! Running infimum of a sampled curve from its left endpoint delta, with the
//! generalized inverse inf{x >= delta : inf_{delta <= y <= x} g(y) <= z}.
struct MonotoneInverse {
  double delta = 0.0;
  Eigen::VectorXd abscissae;
  Eigen::VectorXd envelope;
  std::string source_label;
};

//! Prefix minimum of `values` sampled at increasing `abscissae`; the first
//! abscissa is taken as delta.
MonotoneInverse running_infimum(const Eigen::VectorXd& abscissae, const Eigen::VectorXd& values,
                                std::string label = {});

struct InverseValue {
  double x = 0.0;
  bool out_of_range = false;
};

//! Leftmost abscissa whose envelope value is <= z; delta when z >= envelope[0];
//! the last abscissa with out_of_range set when no abscissa qualifies.
InverseValue pseudo_inverse(const MonotoneInverse& mi, double z);

//! Two-column CSV (x, envelope).
void write_envelope_csv(std::ostream& out, const MonotoneInverse& mi);

}  // namespace levycop
