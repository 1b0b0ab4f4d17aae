#include "levycop/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace levycop {

MonotoneInverse running_infimum(const Eigen::VectorXd& abscissae, const Eigen::VectorXd& values,
                                std::string label) {
  if (abscissae.size() == 0) throw std::invalid_argument("running_infimum: empty input");
  if (abscissae.size() != values.size())
    throw std::invalid_argument("running_infimum: size mismatch");
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values(k)) || values(k) < 0)
      throw std::invalid_argument("running_infimum: values must be finite and nonnegative");
    if (k > 0 && !(abscissae(k) > abscissae(k - 1)))
      throw std::invalid_argument("running_infimum: abscissae must increase");
  }
  MonotoneInverse mi;
  mi.delta = abscissae(0);
  mi.abscissae = abscissae;
  mi.envelope = values;
  for (Eigen::Index k = 1; k < values.size(); ++k)
    mi.envelope(k) = std::min(mi.envelope(k - 1), values(k));
  mi.source_label = std::move(label);
  return mi;
}

InverseValue pseudo_inverse(const MonotoneInverse& mi, double z) {
  if (!(z > 0)) throw std::invalid_argument("pseudo_inverse: z must be positive");
  const auto& e = mi.envelope;
  if (z >= e(0)) return {mi.delta, false};
  // Envelope is nonincreasing: first index with e <= z.
  const auto* first = e.data();
  const auto* last = e.data() + e.size();
  const auto* it = std::partition_point(first, last, [z](double v) { return v > z; });
  if (it == last) return {mi.abscissae(e.size() - 1), true};
  return {mi.abscissae(it - first), false};
}

void write_envelope_csv(std::ostream& out, const MonotoneInverse& mi) {
  out << "x,envelope\n";
  out.precision(17);
  for (Eigen::Index k = 0; k < mi.abscissae.size(); ++k)
    out << mi.abscissae(k) << ',' << mi.envelope(k) << '\n';
}

}  // namespace levycop
