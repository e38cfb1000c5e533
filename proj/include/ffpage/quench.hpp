#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ffpage/gaussian_state.hpp"
#include "ffpage/linalg.hpp"

namespace ffpage {

/// amplitude(parity of j) a_j^dagger a_{j+range} + h.c., summed over all j
/// with periodic boundaries.
struct Hopping {
  Index range = 1;
  Complex even_amplitude{0.0, 0.0};
  Complex odd_amplitude{0.0, 0.0};
};

/// Period-2 translation-invariant hopping Hamiltonian on an even ring.
struct HamiltonianSpec {
  Index modes = 0;
  std::vector<Hopping> hoppings;
  std::string name = "custom";

  /// modes even and >= 2, 1 <= range < modes for every term.
  void validate() const;

  /// Nearest-neighbour hopping of unit amplitude, E_k = 2 cos k.
  static HamiltonianSpec minimal(Index modes);
  /// Minimal model plus J (+1 on even j, -1 on odd j) at an odd range.
  static HamiltonianSpec odd_range(Index modes, double coupling, Index range = 3);
  /// Minimal model plus J (+1 on even j, -1 on odd j) at an even range.
  static HamiltonianSpec even_range(Index modes, double coupling, Index range = 2);
};

/// N x N single-particle matrix with h_{j, j+r} += amplitude(j mod 2) and
/// the conjugate entry h_{j+r, j}.
HermitianMatrix build_single_particle(const HamiltonianSpec& spec);

/// Density wave with even sites (0, 2, ...) occupied: diag(1, 0, 1, 0, ...).
CovarianceMatrix density_wave_covariance(Index modes);

/// Single-particle evolution of a covariance matrix,
///   C(t)_{jk} = <a_j^dagger(t) a_k(t)> = (V C0 V^dagger)_{jk},  V = exp(+i conj(h) t),
/// for H = sum_jk h_jk a_j^dagger a_k. For real h this is V = exp(+i h t).
///
/// conj(h) = W diag(E) W^dagger is diagonalized once; with G = W^dagger C0 W,
///   C(t) = W [exp(i (E_a - E_b) t) G_ab] W^dagger.
class CovariancePropagator {
 public:
  CovariancePropagator(const HermitianMatrix& h, const CovarianceMatrix& c0);

  [[nodiscard]] Index modes() const noexcept { return w_.rows(); }

  [[nodiscard]] CovarianceMatrix at(double t) const;

  /// C = W (phase .* G) W^dagger for an explicit entrywise phase matrix.
  [[nodiscard]] CovarianceMatrix with_phases(const Matrix& phase) const;

  /// Phase matrix for one realization of the frequency-phase ensemble: pairs
  /// (a, b) carrying weight |G_ab| > 1e-12 are grouped into classes of equal
  /// |E_a - E_b| (tolerance 1e-9); each nonzero class gets a uniform random
  /// phase phi, applied as exp(i phi sign(E_a - E_b)). Zero frequencies keep
  /// phase 1.
  [[nodiscard]] Matrix random_phases(RandomStream& rng) const;

  [[nodiscard]] std::size_t frequency_class_count() const noexcept { return class_count_; }
  [[nodiscard]] const RealVector& energies() const noexcept { return energies_; }

 private:
  RealVector energies_;
  Matrix w_;
  Matrix g_;
  // class_of_[a * n + b] = class index + 1 with sign of E_a - E_b, 0 for untouched.
  std::vector<int> class_of_;
  std::size_t class_count_ = 0;
};

CovarianceMatrix evolve_covariance(const HermitianMatrix& h, const CovarianceMatrix& c0, double t);

/// C~ = F C F^dagger with F_{kj} = exp(-i k j) / sqrt(N), k = 2 pi n / N.
Matrix momentum_correlator(const CovarianceMatrix& c);

/// 2 x 2 Bloch block in the (A, B) basis at reduced momentum k, where B
/// collects even sites and A odd sites:
///   b_k = sqrt(2/N) sum_{j even} e^{-ikj} a_j,  a_k = sqrt(2/N) sum_{j odd} e^{-ikj} a_j.
/// Index 0 is A, index 1 is B. Valid for any real k.
Eigen::Matrix2cd bloch_block(const HamiltonianSpec& spec, double k);

struct ModeOccupation {
  double momentum = 0.0;  ///< in [0, 2 pi)
  double energy = 0.0;
  double occupation = 0.0;
  double eta = 0.0;  ///< sqrt(n (1 - n))
  bool degenerate = false;
};

/// Conserved eigenmode occupations of the density wave. For reduced momentum
/// k = 2 pi n / N (n < N/2) the block eigenmodes are P_k (lower) and Q_k
/// (upper); entry n holds Q_k at momentum k and entry n + N/2 holds P_k at
/// momentum k + pi, so occupations[n + N/2] = 1 - occupations[n].
struct OccupationProfile {
  Index modes = 0;
  std::vector<ModeOccupation> entries;  ///< N entries, momentum ascending
  bool theorem2_satisfied = false;      ///< every |n - 1/2| < 1e-9

  /// Half-filling relation n_{k+pi} = 1 - n_k within 1e-9 and n in [0, 1].
  void validate() const;
  [[nodiscard]] double max_deviation_from_half() const;
};

/// Block-diagonalizes h and evaluates n = v^dagger C0_block v per eigenmode.
/// Degenerate blocks (splitting < 1e-9) take their eigenvectors from the
/// nearest non-degenerate momentum along the continuous Bloch family; when
/// the block is degenerate in a whole neighbourhood the occupations fall back
/// to the eigenvalues of the restricted C0.
OccupationProfile conserved_occupations(const HamiltonianSpec& spec);

/// Profile with every occupation 1/2 (or any caller-chosen table).
OccupationProfile uniform_occupations(Index modes, double occupation = 0.5);

enum class TimeScheme { kUniformWindow, kFrequencyPhaseEnsemble };

[[nodiscard]] std::string_view to_string(TimeScheme scheme);
[[nodiscard]] TimeScheme parse_time_scheme(std::string_view name);

struct TimeGrid {
  TimeScheme scheme = TimeScheme::kUniformWindow;
  double t_min = 1e3;
  double t_max = 1e4;
  std::size_t samples = 1024;
  std::uint64_t seed = 0;

  /// 0 <= t_min < t_max, samples >= 1.
  void validate() const;
};

/// Uniform-window scheme: `samples` i.i.d. uniform draws from [t_min, t_max].
std::vector<double> sample_times(const TimeGrid& grid);

}  // namespace ffpage
