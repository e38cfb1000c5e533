#include "ffpage/quench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <tuple>

#include "ffpage/error.hpp"

namespace ffpage {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegeneracyTolerance = 1e-9;
constexpr double kFrequencyTolerance = 1e-9;
constexpr double kWeightCutoff = 1e-12;
constexpr Index kSiteA = 0;  // odd sites
constexpr Index kSiteB = 1;  // even sites

Index sublattice(Index j) { return (j % 2 == 0) ? kSiteB : kSiteA; }

HamiltonianSpec with_staggered_term(Index modes, double coupling, Index range, const char* name) {
  HamiltonianSpec spec = HamiltonianSpec::minimal(modes);
  spec.hoppings.push_back({range, Complex(coupling, 0.0), Complex(-coupling, 0.0)});
  spec.name = name;
  return spec;
}

}  // namespace

void HamiltonianSpec::validate() const {
  detail::require(modes >= 2 && modes % 2 == 0,
                  "period-2 Hamiltonian needs an even mode count >= 2, got " + std::to_string(modes));
  for (const auto& term : hoppings) {
    detail::require(term.range >= 1 && term.range < modes,
                    "hopping range " + std::to_string(term.range) + " outside [1, " +
                        std::to_string(modes - 1) + "]");
    detail::require(std::isfinite(term.even_amplitude.real()) &&
                        std::isfinite(term.even_amplitude.imag()) &&
                        std::isfinite(term.odd_amplitude.real()) &&
                        std::isfinite(term.odd_amplitude.imag()),
                    "hopping amplitudes must be finite");
  }
}

HamiltonianSpec HamiltonianSpec::minimal(Index modes) {
  HamiltonianSpec spec{modes, {{1, Complex(1.0, 0.0), Complex(1.0, 0.0)}}, "minimal"};
  spec.validate();
  return spec;
}

HamiltonianSpec HamiltonianSpec::odd_range(Index modes, double coupling, Index range) {
  detail::require(range % 2 == 1, "odd_range needs an odd hopping range");
  auto spec = with_staggered_term(modes, coupling, range, "odd-range");
  spec.validate();
  return spec;
}

HamiltonianSpec HamiltonianSpec::even_range(Index modes, double coupling, Index range) {
  detail::require(range % 2 == 0, "even_range needs an even hopping range");
  auto spec = with_staggered_term(modes, coupling, range, "even-range");
  spec.validate();
  return spec;
}

HermitianMatrix build_single_particle(const HamiltonianSpec& spec) {
  spec.validate();
  const Index n = spec.modes;
  Matrix h = Matrix::Zero(n, n);
  for (const auto& term : spec.hoppings) {
    for (Index j = 0; j < n; ++j) {
      const Complex amp = (j % 2 == 0) ? term.even_amplitude : term.odd_amplitude;
      const Index k = (j + term.range) % n;
      h(j, k) += amp;
      h(k, j) += std::conj(amp);
    }
  }
  return HermitianMatrix(std::move(h));
}

CovarianceMatrix density_wave_covariance(Index modes) {
  detail::require(modes >= 2 && modes % 2 == 0, "density wave needs an even mode count");
  RealVector occ(modes);
  for (Index j = 0; j < modes; ++j) occ(j) = (j % 2 == 0) ? 1.0 : 0.0;
  return CovarianceMatrix::diagonal(occ);
}

CovariancePropagator::CovariancePropagator(const HermitianMatrix& h, const CovarianceMatrix& c0) {
  detail::require(h.dim() == c0.dim(), "Hamiltonian and covariance dimensions differ");
  const Index n = h.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix(h.matrix().conjugate()));
  if (solver.info() != Eigen::Success) throw NumericalError("Hamiltonian eigensolver did not converge");
  energies_ = solver.eigenvalues();
  w_ = solver.eigenvectors();
  g_ = w_.adjoint() * c0.matrix() * w_;

  std::vector<std::tuple<double, Index, Index>> pairs;
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const double omega = std::abs(energies_(a) - energies_(b));
      if (omega > kFrequencyTolerance && std::abs(g_(a, b)) > kWeightCutoff) {
        pairs.emplace_back(omega, a, b);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  class_of_.assign(static_cast<std::size_t>(n * n), 0);
  int cls = 0;
  double last = -1.0;
  for (const auto& [omega, a, b] : pairs) {
    if (cls == 0 || omega - last > kFrequencyTolerance) ++cls;
    last = omega;
    const int sign = (energies_(a) > energies_(b)) ? 1 : -1;
    class_of_[static_cast<std::size_t>(a * n + b)] = sign * cls;
    class_of_[static_cast<std::size_t>(b * n + a)] = -sign * cls;
  }
  class_count_ = static_cast<std::size_t>(cls);
}

CovarianceMatrix CovariancePropagator::at(double t) const {
  const Vector d = (Complex(0.0, t) * energies_.cast<Complex>()).array().exp().matrix();
  const Matrix inner = d.asDiagonal() * g_ * d.conjugate().asDiagonal();
  return CovarianceMatrix(HermitianMatrix(Matrix(w_ * inner * w_.adjoint()), 1e-9));
}

CovarianceMatrix CovariancePropagator::with_phases(const Matrix& phase) const {
  detail::require(phase.rows() == g_.rows() && phase.cols() == g_.cols(),
                  "phase matrix has the wrong shape");
  const Matrix inner = phase.cwiseProduct(g_);
  return CovarianceMatrix(HermitianMatrix(Matrix(w_ * inner * w_.adjoint()), 1e-9));
}

Matrix CovariancePropagator::random_phases(RandomStream& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  std::vector<double> phi(class_count_ + 1, 0.0);
  for (std::size_t c = 1; c <= class_count_; ++c) phi[c] = uniform(rng);
  const Index n = g_.rows();
  Matrix phase = Matrix::Ones(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const int cls = class_of_[static_cast<std::size_t>(a * n + b)];
      if (cls == 0) continue;
      const double angle = (cls > 0 ? 1.0 : -1.0) * phi[static_cast<std::size_t>(std::abs(cls))];
      phase(a, b) = std::polar(1.0, angle);
    }
  }
  return phase;
}

CovarianceMatrix evolve_covariance(const HermitianMatrix& h, const CovarianceMatrix& c0, double t) {
  return CovariancePropagator(h, c0).at(t);
}

Matrix momentum_correlator(const CovarianceMatrix& c) {
  const Index n = c.dim();
  Matrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index q = 0; q < n; ++q) {
    const double k = kTwoPi * static_cast<double>(q) / static_cast<double>(n);
    for (Index j = 0; j < n; ++j) f(q, j) = std::polar(norm, -k * static_cast<double>(j));
  }
  return f * c.matrix() * f.adjoint();
}

Eigen::Matrix2cd bloch_block(const HamiltonianSpec& spec, double k) {
  spec.validate();
  Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
  for (const auto& term : spec.hoppings) {
    const Complex phase = std::polar(1.0, k * static_cast<double>(term.range));
    for (Index parity = 0; parity < 2; ++parity) {
      const Complex amp = (parity == 0) ? term.even_amplitude : term.odd_amplitude;
      const Index from = sublattice(parity);
      const Index to = sublattice(parity + term.range);
      block(from, to) += amp * phase;
      block(to, from) += std::conj(amp * phase);
    }
  }
  return block;
}

namespace {

struct BlockModes {
  double lower_energy = 0.0;
  double upper_energy = 0.0;
  double lower_occupation = 0.0;
  double upper_occupation = 0.0;
  bool degenerate = false;
};

// Occupation of eigenvector v under the density wave, C0_block = diag(0, 1).
double occupation(const Eigen::Vector2cd& v) { return std::norm(v(kSiteB)); }

BlockModes analyze_block(const HamiltonianSpec& spec, double k, double spacing) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(bloch_block(spec, k));
  BlockModes out;
  out.lower_energy = solver.eigenvalues()(0);
  out.upper_energy = solver.eigenvalues()(1);
  if (out.upper_energy - out.lower_energy >= kDegeneracyTolerance) {
    out.lower_occupation = occupation(solver.eigenvectors().col(0));
    out.upper_occupation = occupation(solver.eigenvectors().col(1));
    return out;
  }
  out.degenerate = true;
  // Any basis diagonalizes a degenerate block; take the one that is
  // continuous along the Bloch family, when a nearby momentum splits.
  for (double scale : {1e-6, 1e-4, 1e-2}) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> near(bloch_block(spec, k + scale * spacing));
    if (near.eigenvalues()(1) - near.eigenvalues()(0) >= kDegeneracyTolerance) {
      out.lower_occupation = occupation(near.eigenvectors().col(0));
      out.upper_occupation = occupation(near.eigenvectors().col(1));
      return out;
    }
  }
  // Degenerate everywhere nearby: the spectrum of C0 on the 2d subspace.
  out.lower_occupation = 0.0;
  out.upper_occupation = 1.0;
  return out;
}

}  // namespace

OccupationProfile conserved_occupations(const HamiltonianSpec& spec) {
  spec.validate();
  const Index n = spec.modes;
  const Index half = n / 2;
  const double spacing = kTwoPi / static_cast<double>(n);
  OccupationProfile profile;
  profile.modes = n;
  profile.entries.resize(static_cast<std::size_t>(n));
  for (Index q = 0; q < half; ++q) {
    const double k = spacing * static_cast<double>(q);
    const BlockModes modes = analyze_block(spec, k, spacing);
    auto& upper = profile.entries[static_cast<std::size_t>(q)];
    auto& lower = profile.entries[static_cast<std::size_t>(q + half)];
    upper = {k, modes.upper_energy, modes.upper_occupation, 0.0, modes.degenerate};
    lower = {k + std::numbers::pi, modes.lower_energy, modes.lower_occupation, 0.0,
             modes.degenerate};
  }
  bool all_half = true;
  for (auto& e : profile.entries) {
    e.occupation = std::clamp(e.occupation, 0.0, 1.0);
    e.eta = std::sqrt(e.occupation * (1.0 - e.occupation));
    all_half = all_half && std::abs(e.occupation - 0.5) < 1e-9;
  }
  profile.theorem2_satisfied = all_half;
  profile.validate();
  return profile;
}

OccupationProfile uniform_occupations(Index modes, double occupation) {
  detail::require(modes >= 2 && modes % 2 == 0, "occupation profile needs an even mode count");
  detail::require(occupation >= 0.0 && occupation <= 1.0, "occupation must lie in [0, 1]");
  OccupationProfile profile;
  profile.modes = modes;
  const Index half = modes / 2;
  for (Index q = 0; q < modes; ++q) {
    const double n = (q < half) ? occupation : 1.0 - occupation;
    profile.entries.push_back({kTwoPi * static_cast<double>(q) / static_cast<double>(modes), 0.0, n,
                               std::sqrt(n * (1.0 - n)), false});
  }
  profile.theorem2_satisfied = std::abs(occupation - 0.5) < 1e-9;
  profile.validate();
  return profile;
}

void OccupationProfile::validate() const {
  detail::require(modes >= 2 && modes % 2 == 0, "occupation profile needs an even mode count");
  detail::require(entries.size() == static_cast<std::size_t>(modes),
                  "occupation profile must hold one entry per mode");
  const std::size_t half = entries.size() / 2;
  for (std::size_t q = 0; q < entries.size(); ++q) {
    const double n = entries[q].occupation;
    detail::require(n >= 0.0 && n <= 1.0, "occupation outside [0, 1]");
    if (q < half) {
      const double partner = entries[q + half].occupation;
      if (std::abs(n + partner - 1.0) > 1e-9) {
        throw ValidationError("occupations violate n_{k+pi} = 1 - n_k at index " +
                              std::to_string(q));
      }
    }
  }
}

double OccupationProfile::max_deviation_from_half() const {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, std::abs(e.occupation - 0.5));
  return worst;
}

namespace {

constexpr std::array<std::pair<TimeScheme, std::string_view>, 2> kSchemeNames{{
    {TimeScheme::kUniformWindow, "uniform-window"},
    {TimeScheme::kFrequencyPhaseEnsemble, "frequency-phase-ensemble"},
}};

}  // namespace

std::string_view to_string(TimeScheme scheme) {
  for (const auto& [s, name] : kSchemeNames) {
    if (s == scheme) return name;
  }
  return "unknown";
}

TimeScheme parse_time_scheme(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames) {
    if (n == name) return s;
  }
  throw ValidationError("unknown time scheme '" + std::string(name) + "'");
}

void TimeGrid::validate() const {
  detail::require(t_min >= 0.0 && t_min < t_max, "time window needs 0 <= t_min < t_max");
  detail::require(std::isfinite(t_max), "time window must be finite");
  detail::require(samples >= 1, "time grid needs at least one sample");
}

std::vector<double> sample_times(const TimeGrid& grid) {
  grid.validate();
  RandomStream rng = RandomStream(grid.seed).split(stream_tag::kTimes);
  std::uniform_real_distribution<double> uniform(grid.t_min, grid.t_max);
  std::vector<double> times(grid.samples);
  for (auto& t : times) t = uniform(rng);
  return times;
}

}  // namespace ffpage
