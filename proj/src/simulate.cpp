#include "levycop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "levycop/quadrature.hpp"

namespace levycop {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kEnvelopeSlack = 1.05;

double uniform(std::mt19937_64& rng) { return boost::random::uniform_01<double>{}(rng); }

// One radial interval [lo, hi) sampled by rejection from a proposal with
// unnormalized density q.
struct RadialPiece {
  enum class Proposal { power, shifted_exponential, log_uniform };
  Proposal proposal = Proposal::power;
  double lo = 0.0;
  double hi = kInfinity;
  double exponent = 0.0;  // q(r) = r^{-exponent} for power
  double bound = 0.0;     // sup target / q
  double mass = 0.0;

  double q(double r) const {
    switch (proposal) {
      case Proposal::power: return std::pow(r, -exponent);
      case Proposal::shifted_exponential: return std::exp(-(r - lo));
      case Proposal::log_uniform: {
        const double lr = std::log(r);
        return 1.0 / (r * lr * lr);
      }
    }
    return 0.0;
  }

  double propose(std::mt19937_64& rng) const {
    const double v = uniform(rng);
    switch (proposal) {
      case Proposal::power: {
        if (exponent == 1.0) return lo * std::pow(hi / lo, v);
        const double e = 1.0 - exponent;
        const double a = std::pow(lo, e);
        const double b = std::pow(hi, e);
        return std::pow(a + v * (b - a), 1.0 / e);
      }
      case Proposal::shifted_exponential:
        return lo + boost::random::exponential_distribution<double>{}(rng);
      case Proposal::log_uniform: {
        const double t0 = quad::log_parameter(lo);
        const double t1 = quad::log_parameter(hi);
        return quad::log_radius(t0 + v * (t1 - t0));
      }
    }
    return lo;
  }
};

RadialPiece make_piece(const JumpDensitySpec& spec, RadialPiece::Proposal proposal, double lo,
                       double hi, double exponent) {
  RadialPiece piece;
  piece.proposal = proposal;
  piece.lo = lo;
  piece.hi = hi;
  piece.exponent = exponent;
  const double top = std::isfinite(hi) ? hi : lo + 60.0;
  constexpr int kScan = 4000;
  double bound = 0.0;
  for (int i = 0; i <= kScan; ++i) {
    // Geometric spacing resolves the region near small lo.
    const double s = static_cast<double>(i) / kScan;
    const double r = lo > 0 ? lo * std::pow(top / lo, s) : top * s;
    if (r <= 0) continue;
    const double ratio = spec.radial_density(r) / piece.q(r);
    if (std::isfinite(ratio)) bound = std::max(bound, ratio);
  }
  piece.bound = kEnvelopeSlack * bound;
  piece.mass = radial_moment(spec, 0.0, lo, hi);
  return piece;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::mt19937_64 replication_stream(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(replication_seed(master_seed, index));
}

struct IncrementSampler::Impl {
  LevyModelSpec model;
  double epsilon = 0.0;
  double rate = 0.0;
  Eigen::Vector2d drift = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d covariance_root = Eigen::Matrix2d::Zero();

  std::vector<RadialPiece> pieces;
  std::vector<double> piece_cdf;
  std::vector<double> atom_cdf;
  double box = 0.0;
  double box_bound = 0.0;

  double draw_angle(std::mt19937_64& rng) const {
    // angular_weight lies in [1, 2].
    for (;;) {
      const double theta = kHalfPi * uniform(rng);
      if (2.0 * uniform(rng) <= angular_weight(theta)) return theta;
    }
  }

  double draw_radius(std::mt19937_64& rng) const {
    const double v = uniform(rng) * piece_cdf.back();
    const auto it = std::upper_bound(piece_cdf.begin(), piece_cdf.end(), v);
    const auto& piece = pieces[std::min<std::size_t>(it - piece_cdf.begin(), pieces.size() - 1)];
    for (;;) {
      const double r = piece.propose(rng);
      if (r <= 0.0) continue;
      if (uniform(rng) * piece.bound * piece.q(r) <= model.jumps.radial_density(r)) return r;
    }
  }

  Eigen::Vector2d draw_jump(std::mt19937_64& rng) const {
    const auto& spec = model.jumps;
    if (spec.kind == DensityKind::point_masses) {
      const double v = uniform(rng) * atom_cdf.back();
      const auto it = std::upper_bound(atom_cdf.begin(), atom_cdf.end(), v);
      return spec.atoms[std::min<std::size_t>(it - atom_cdf.begin(), atom_cdf.size() - 1)].location;
    }
    if (spec.kind == DensityKind::custom) {
      for (;;) {
        const double x1 = box * uniform(rng);
        const double x2 = box * uniform(rng);
        if (uniform(rng) * box_bound <= spec.density(x1, x2)) return {x1, x2};
      }
    }
    const double theta = draw_angle(rng);
    const double r = draw_radius(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  void setup_radial(const JumpDensitySpec& spec) {
    using P = RadialPiece::Proposal;
    switch (spec.kind) {
      case DensityKind::beta_family:
        pieces.push_back(make_piece(spec, P::power, epsilon, 1.0, 1.0 + spec.beta));
        pieces.push_back(make_piece(spec, P::shifted_exponential, 1.0, kInfinity, 0.0));
        break;
      case DensityKind::beta_two:
        pieces.push_back(make_piece(spec, P::power, epsilon, 0.75, 3.0));
        pieces.push_back(make_piece(spec, P::shifted_exponential, 0.75, kInfinity, 0.0));
        break;
      case DensityKind::cpp_log_density:
        pieces.push_back(make_piece(spec, P::log_uniform, 0.0, 0.5, 0.0));
        pieces.push_back(make_piece(spec, P::power, 0.5, 0.75, 0.0));
        pieces.push_back(make_piece(spec, P::shifted_exponential, 0.75, kInfinity, 0.0));
        break;
      default:
        break;
    }
    double acc = 0.0;
    for (const auto& piece : pieces) piece_cdf.push_back(acc += piece.mass);
    rate = angular_moment(0, 0) * acc;
  }

  void setup_custom(const JumpDensitySpec& spec) {
    box = 40.0;
    constexpr int kScan = 400;
    double bound = 0.0;
    for (int i = 0; i <= kScan; ++i)
      for (int j = 0; j <= kScan; ++j) {
        if (i == 0 && j == 0) continue;
        const double v = spec.density(box * i / kScan, box * j / kScan);
        if (!std::isfinite(v))
          throw std::invalid_argument("sample_increments: custom density unbounded on the box");
        bound = std::max(bound, v);
      }
    box_bound = kEnvelopeSlack * bound;
    rate = total_mass(spec);
  }
};

IncrementSampler::IncrementSampler(const LevyModelSpec& model, const SimulationOptions& opts)
    : impl_(std::make_unique<Impl>()) {
  validate(model);
  Impl& s = *impl_;
  s.model = model;
  const auto& spec = model.jumps;
  const bool compensated = model.representation == Representation::compensated;
  if (!spec.finite_activity()) {
    if (!(opts.epsilon > 0.0))
      throw std::invalid_argument("sample_increments: compensated model needs epsilon > 0");
    s.epsilon = opts.epsilon;
  }

  if (spec.kind == DensityKind::point_masses) {
    double acc = 0.0;
    for (const auto& atom : spec.atoms) s.atom_cdf.push_back(acc += atom.weight);
    s.rate = acc;
  } else if (spec.kind == DensityKind::custom) {
    s.setup_custom(spec);
  } else {
    s.setup_radial(spec);
  }

  s.drift = model.alpha;
  s.covariance = model.sigma;
  if (compensated && s.rate > 0.0) {
    if (spec.kind == DensityKind::point_masses) {
      for (const auto& atom : spec.atoms) s.drift -= atom.weight * atom.location;
    } else if (spec.kind == DensityKind::custom) {
      throw std::invalid_argument("sample_increments: compensated custom densities are not supported");
    } else {
      const double first = radial_moment(spec, 1.0, s.epsilon, kInfinity);
      s.drift -= first * Eigen::Vector2d(angular_moment(1, 0), angular_moment(0, 1));
      if (s.epsilon > 0.0) {
        const double second = radial_moment(spec, 2.0, 0.0, s.epsilon);
        Eigen::Matrix2d m;
        m << angular_moment(2, 0), angular_moment(1, 1), angular_moment(1, 1), angular_moment(0, 2);
        s.covariance += second * m;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(s.covariance);
  const Eigen::Vector2d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  s.covariance_root = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

IncrementSampler::~IncrementSampler() = default;
IncrementSampler::IncrementSampler(IncrementSampler&&) noexcept = default;
IncrementSampler& IncrementSampler::operator=(IncrementSampler&&) noexcept = default;

double IncrementSampler::jump_rate() const { return impl_->rate; }
Eigen::Vector2d IncrementSampler::drift() const { return impl_->drift; }
Eigen::Matrix2d IncrementSampler::gaussian_covariance() const { return impl_->covariance; }
Eigen::Vector2d IncrementSampler::draw_jump(std::mt19937_64& rng) const {
  return impl_->draw_jump(rng);
}

IncrementPanel IncrementSampler::sample(long n, std::uint64_t seed) const {
  if (n <= 0) throw std::invalid_argument("sample_increments: n must be positive");
  const Impl& s = *impl_;
  std::mt19937_64 rng(seed);
  IncrementPanel panel;
  panel.n = n;
  panel.seed = seed;
  panel.model_label = s.model.label;
  panel.approximation_epsilon = s.epsilon;
  panel.z.resize(n, 2);
  const bool gaussian = !s.covariance.isZero(0.0);
  boost::random::poisson_distribution<long, double> count(s.rate > 0 ? s.rate : 1.0);
  boost::random::normal_distribution<double> normal;
  for (long t = 0; t < n; ++t) {
    Eigen::Vector2d z = s.drift;
    if (s.rate > 0.0) {
      const long k = count(rng);
      for (long j = 0; j < k; ++j) z += s.draw_jump(rng);
    }
    if (gaussian) {
      const double g1 = normal(rng);
      const double g2 = normal(rng);
      z += s.covariance_root * Eigen::Vector2d(g1, g2);
    }
    panel.z.row(t) = z.transpose();
  }
  return panel;
}

IncrementPanel sample_increments(const LevyModelSpec& model, long n, std::uint64_t seed,
                                 const SimulationOptions& opts) {
  if (n <= 0) throw std::invalid_argument("sample_increments: n must be positive");
  return IncrementSampler(model, opts).sample(n, seed);
}

void write_panel_csv(std::ostream& out, const IncrementPanel& panel) {
  out << "# model: " << panel.model_label << "\n";
  out << "# seed: " << panel.seed << "\n";
  out << "# epsilon: " << std::setprecision(17) << panel.approximation_epsilon << "\n";
  out << "t,z1,z2\n";
  for (long t = 0; t < panel.n; ++t)
    out << (t + 1) << ',' << panel.z(t, 0) << ',' << panel.z(t, 1) << '\n';
}

IncrementPanel read_panel_csv(std::istream& in) {
  IncrementPanel panel;
  std::vector<Eigen::Vector2d> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      key.erase(0, key.find_first_not_of(' '));
      value.erase(0, value.find_first_not_of(' '));
      if (key == "model") panel.model_label = value;
      else if (key == "seed") panel.seed = std::stoull(value);
      else if (key == "epsilon") panel.approximation_epsilon = std::stod(value);
      continue;
    }
    if (line.rfind("t,", 0) == 0) continue;
    std::istringstream fields(line);
    std::string t, a, b;
    if (!std::getline(fields, t, ',') || !std::getline(fields, a, ',') || !std::getline(fields, b))
      throw std::runtime_error("read_panel_csv: malformed row '" + line + "'");
    rows.emplace_back(std::stod(a), std::stod(b));
  }
  panel.n = static_cast<long>(rows.size());
  panel.z.resize(panel.n, 2);
  for (long t = 0; t < panel.n; ++t) panel.z.row(t) = rows[t].transpose();
  return panel;
}

}  // namespace levycop
