#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffpage/gaussian_state.hpp"
#include "ffpage/linalg.hpp"

namespace ffpage::oracle {

/// Brute-force many-body reference in the full 2^N Fock space.
///
/// Basis conventions:
///  - basis index x has bit j set iff mode j is occupied;
///  - |x> = (a_0^dagger)^{n_0} (a_1^dagger)^{n_1} ... |vac>, so a_j^dagger
///    acting on |x> picks up (-1)^{number of occupied modes with index < j};
///  - bitstrings are printed with mode 0 first ("1010" = modes 0 and 2).

inline constexpr int kMaxModes = 12;

class FockState {
 public:
  /// Validates 1 <= modes <= kMaxModes, length 2^modes and unit norm (1e-10).
  FockState(int modes, Vector amplitudes);

  /// Single occupation basis state.
  static FockState basis(int modes, std::uint32_t occupation);

  [[nodiscard]] int modes() const noexcept { return modes_; }
  [[nodiscard]] const Vector& amplitudes() const noexcept { return amplitudes_; }

 private:
  int modes_;
  Vector amplitudes_;
};

std::string occupation_bitstring(std::uint32_t occupation, int modes);

/// Period-2 density wave at half filling: even modes (0, 2, 4, ...) occupied.
FockState build_density_wave(int modes);

/// Applies a_j^dagger (create) or a_j (annihilate) to a raw amplitude vector.
Vector apply_creation(const Vector& amplitudes, int modes, int j);
Vector apply_annihilation(const Vector& amplitudes, int modes, int j);

/// e^{-iHt} for H = sum_jk h_jk a_j^dagger a_k. H is assembled once per
/// particle-number sector and diagonalized; `evolve` reuses the factorization.
class FockPropagator {
 public:
  explicit FockPropagator(const HermitianMatrix& single_particle);

  [[nodiscard]] int modes() const noexcept { return modes_; }
  [[nodiscard]] FockState evolve(const FockState& psi, double t) const;

  /// Dense many-body Hamiltonian restricted to the sector with `particles`
  /// fermions, in the order of `sector_basis(particles)`.
  [[nodiscard]] Matrix sector_hamiltonian(int particles) const;
  [[nodiscard]] const std::vector<std::uint32_t>& sector_basis(int particles) const;

 private:
  struct Sector {
    std::vector<std::uint32_t> basis;
    RealVector energies;
    Matrix vectors;
  };

  int modes_;
  Matrix h_;
  std::vector<Sector> sectors_;  // indexed by particle number
};

FockState evolve_fock(const FockState& psi, const HermitianMatrix& single_particle, double t);

/// C_jk = <psi| a_j^dagger a_k |psi>.
CovarianceMatrix fock_covariance(const FockState& psi);

/// <psi| a_i^dagger a_j^dagger a_k a_l |psi>.
Complex four_point(const FockState& psi, int i, int j, int k, int l);

/// <psi| N |psi>.
double particle_number(const FockState& psi);

/// Reduced density matrix on `subsystem`, in the basis of occupations of the
/// selected modes (bit a <-> a-th selected mode). Modes are reordered so the
/// subsystem forms a prefix before tracing out the rest; the reordering sign
/// is (-1)^{#pairs (b in complement, a in subsystem, b < a, both occupied)}.
Matrix reduced_density_matrix(const FockState& psi, const SubsystemSelection& subsystem);

/// Von Neumann entropy of the reduced state, in bits.
double fock_entropy(const FockState& psi, const SubsystemSelection& subsystem);

}  // namespace ffpage::oracle
