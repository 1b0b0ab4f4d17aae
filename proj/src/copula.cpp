#include "levycop/copula.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "levycop/levy_model.hpp"

namespace levycop {

double offset_delta(long n, Regime regime, double multiplier) {
  if (n < 16) throw std::invalid_argument("offset_delta: n must be at least 16");
  const double log_n = std::log(static_cast<double>(n));
  return multiplier / (regime == Regime::cpp ? log_n : std::log(log_n));
}

Eigen::VectorXd ladder(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("ladder: count must be positive");
  if (count == 1) return Eigen::VectorXd::Constant(1, lo);
  return Eigen::VectorXd::LinSpaced(count, lo, hi);
}

int CopulaSurface::flagged_cells() const { return static_cast<int>((flags != 0u).count()); }

TailSource estimate_source(const TailEstimate& te, double delta) {
  TailSource source;
  source.tail = [&te](double a, double b) { return te.clipped(a, b); };
  source.curve1 = tail_curve(te, 1, delta);
  source.curve2 = tail_curve(te, 2, delta);
  source.well_conditioned = te.conditioning().well_conditioned;
  return source;
}

TailSource truth_source(const TruthTables& truth, double delta, double spacing, double top) {
  std::vector<double> xs{delta};
  for (int i = 1; i * spacing < top; ++i)
    if (i * spacing > delta * (1.0 + 1e-12)) xs.push_back(i * spacing);
  TailSource source;
  source.tail = truth.U;
  auto sample = [&](const std::function<double(double)>& f) {
    TailCurve c;
    c.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    c.value.resize(c.x.size());
    for (Eigen::Index k = 0; k < c.x.size(); ++k) c.value(k) = f(c.x(k));
    return c;
  };
  source.curve1 = sample(truth.U1);
  source.curve2 = sample(truth.U2);
  return source;
}

namespace {

CopulaSurface blank_surface(const Eigen::VectorXd& u, const Eigen::VectorXd& v, Regime regime,
                            double delta_n) {
  CopulaSurface s;
  s.u_values = u;
  s.v_values = v;
  s.values = Eigen::ArrayXXd::Zero(u.size(), v.size());
  s.flags = Eigen::Array<unsigned, Eigen::Dynamic, Eigen::Dynamic>::Zero(u.size(), v.size());
  s.regime = regime;
  s.delta_n = delta_n;
  return s;
}

}  // namespace

CopulaSurface levy_copula_surface(const TailSource& source, double delta_n,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  CopulaSurface s = blank_surface(u, v, Regime::general, delta_n);
  const MonotoneInverse inv1 = running_infimum(source.curve1.x, source.curve1.value, "U1");
  const MonotoneInverse inv2 = running_infimum(source.curve2.x, source.curve2.value, "U2");
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const InverseValue b = pseudo_inverse(inv2, v(j));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const InverseValue a = pseudo_inverse(inv1, u(i));
      s.values(i, j) = std::max(0.0, source.tail(a.x, b.x));
      unsigned flag = kCellOk;
      if (a.out_of_range || b.out_of_range) flag |= kInverseOutOfRange;
      if (!source.well_conditioned) flag |= kIllConditioned;
      s.flags(i, j) = flag;
    }
  }
  return s;
}

CopulaSurface cpp_copula_surface(const TailSource& source, double lambda, double delta_n,
                                 const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (!(lambda > 0)) throw std::invalid_argument("cpp_copula_surface: lambda must be positive");
  CopulaSurface s = blank_surface(u, v, Regime::cpp, delta_n);
  const MonotoneInverse inv1 = running_infimum(source.curve1.x, source.curve1.value, "U1");
  const MonotoneInverse inv2 = running_infimum(source.curve2.x, source.curve2.value, "U2");
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!(v(j) > 0 && v(j) < 1)) throw std::invalid_argument("cpp_copula_surface: v outside (0,1)");
    const InverseValue b = pseudo_inverse(inv2, lambda * (1.0 - v(j)));
    const double tail_b = source.tail(0.0, b.x);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (!(u(i) > 0 && u(i) < 1))
        throw std::invalid_argument("cpp_copula_surface: u outside (0,1)");
      const InverseValue a = pseudo_inverse(inv1, lambda * (1.0 - u(i)));
      const double m = 1.0 + (source.tail(a.x, b.x) - source.tail(a.x, 0.0) - tail_b) / lambda;
      s.values(i, j) = m;
      unsigned flag = kCellOk;
      if (a.out_of_range || b.out_of_range) flag |= kInverseOutOfRange;
      if (!source.well_conditioned) flag |= kIllConditioned;
      if (m < 0.0 || m > 1.0) flag |= kOutsideUnitInterval;
      s.flags(i, j) = flag;
    }
  }
  return s;
}

CopulaSurface levy_copula_estimate(const TailEstimate& te, long n, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v, double delta_mult) {
  const double delta = offset_delta(n, Regime::general, delta_mult);
  if (te.delta_floor() > delta)
    throw std::invalid_argument("levy_copula_estimate: delta_n below the estimate's delta_floor");
  CopulaSurface s = levy_copula_surface(estimate_source(te, delta), delta, u, v);
  s.n = n;
  s.h = te.h();
  return s;
}

CopulaSurface cpp_copula_estimate(const TailEstimate& te, double lambda, long n,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                  double delta_mult) {
  const double delta = offset_delta(n, Regime::cpp, delta_mult);
  if (te.delta_floor() > delta)
    throw std::invalid_argument("cpp_copula_estimate: delta_n below the estimate's delta_floor");
  CopulaSurface s = cpp_copula_surface(estimate_source(te, delta), lambda, delta, u, v);
  s.n = n;
  s.h = te.h();
  return s;
}

double copula_sup_error(const CopulaSurface& surface,
                        const std::function<double(double, double)>& truth) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < surface.v_values.size(); ++j)
    for (Eigen::Index i = 0; i < surface.u_values.size(); ++i)
      worst = std::max(worst, std::abs(surface.values(i, j) -
                                       truth(surface.u_values(i), surface.v_values(j))));
  return worst;
}

void write_surface_csv(std::ostream& out, const CopulaSurface& surface) {
  out << "# regime: " << (surface.regime == Regime::cpp ? "cpp" : "levy") << "\n";
  out << "# n: " << surface.n << "\n";
  out.precision(17);
  out << "# h: " << surface.h << "\n";
  out << "# delta_n: " << surface.delta_n << "\n";
  out << "# model: " << surface.model_label << "\n";
  out << "# seed: " << surface.seed << "\n";
  out << "u,v,value,flag\n";
  for (Eigen::Index i = 0; i < surface.u_values.size(); ++i)
    for (Eigen::Index j = 0; j < surface.v_values.size(); ++j)
      out << surface.u_values(i) << ',' << surface.v_values(j) << ',' << surface.values(i, j)
          << ',' << surface.flags(i, j) << '\n';
}

}  // namespace levycop
