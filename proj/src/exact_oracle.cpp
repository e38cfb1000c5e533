#include "ffpage/exact_oracle.hpp"

#include <bit>
#include <cmath>

#include "ffpage/error.hpp"

namespace ffpage::oracle {
namespace {

void check_modes(int modes) {
  detail::require(modes >= 1, "Fock space needs at least one mode");
  if (modes > kMaxModes) {
    throw ValidationError("Fock-space oracle refuses " + std::to_string(modes) +
                          " modes (limit " + std::to_string(kMaxModes) + ")");
  }
}

// (-1)^{number of occupied modes below j}
double ordering_sign(std::uint32_t x, int j) {
  const std::uint32_t below = x & ((std::uint32_t{1} << j) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

FockState::FockState(int modes, Vector amplitudes) : modes_(modes), amplitudes_(std::move(amplitudes)) {
  check_modes(modes);
  detail::require(amplitudes_.size() == (Index{1} << modes),
                  "Fock amplitudes must have length 2^modes");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw ValidationError("Fock state is not normalized: norm = " + std::to_string(norm));
  }
}

FockState FockState::basis(int modes, std::uint32_t occupation) {
  check_modes(modes);
  detail::require(occupation < (std::uint32_t{1} << modes), "occupation bits exceed mode count");
  Vector amps = Vector::Zero(Index{1} << modes);
  amps(occupation) = 1.0;
  return FockState(modes, std::move(amps));
}

std::string occupation_bitstring(std::uint32_t occupation, int modes) {
  std::string s(static_cast<std::size_t>(modes), '0');
  for (int j = 0; j < modes; ++j) {
    if (occupation & (std::uint32_t{1} << j)) s[static_cast<std::size_t>(j)] = '1';
  }
  return s;
}

FockState build_density_wave(int modes) {
  check_modes(modes);
  detail::require(modes % 2 == 0, "density wave needs an even number of modes");
  std::uint32_t occ = 0;
  for (int j = 0; j < modes; j += 2) occ |= std::uint32_t{1} << j;
  return FockState::basis(modes, occ);
}

Vector apply_creation(const Vector& amplitudes, int modes, int j) {
  detail::require(j >= 0 && j < modes, "mode index out of range");
  Vector out = Vector::Zero(amplitudes.size());
  const std::uint32_t bit = std::uint32_t{1} << j;
  for (Index x = 0; x < amplitudes.size(); ++x) {
    const auto ux = static_cast<std::uint32_t>(x);
    if (ux & bit) continue;
    out(ux | bit) += ordering_sign(ux, j) * amplitudes(x);
  }
  return out;
}

Vector apply_annihilation(const Vector& amplitudes, int modes, int j) {
  detail::require(j >= 0 && j < modes, "mode index out of range");
  Vector out = Vector::Zero(amplitudes.size());
  const std::uint32_t bit = std::uint32_t{1} << j;
  for (Index x = 0; x < amplitudes.size(); ++x) {
    const auto ux = static_cast<std::uint32_t>(x);
    if (!(ux & bit)) continue;
    out(ux ^ bit) += ordering_sign(ux, j) * amplitudes(x);
  }
  return out;
}

FockPropagator::FockPropagator(const HermitianMatrix& single_particle)
    : modes_(static_cast<int>(single_particle.dim())), h_(single_particle.matrix()) {
  check_modes(modes_);
  const std::uint32_t dim = std::uint32_t{1} << modes_;
  sectors_.resize(static_cast<std::size_t>(modes_) + 1);
  for (std::uint32_t x = 0; x < dim; ++x) {
    sectors_[static_cast<std::size_t>(std::popcount(x))].basis.push_back(x);
  }
  for (int p = 0; p <= modes_; ++p) {
    auto& sector = sectors_[static_cast<std::size_t>(p)];
    const Matrix hs = sector_hamiltonian(p);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hs);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("many-body eigensolver did not converge");
    }
    sector.energies = solver.eigenvalues();
    sector.vectors = solver.eigenvectors();
  }
}

const std::vector<std::uint32_t>& FockPropagator::sector_basis(int particles) const {
  detail::require(particles >= 0 && particles <= modes_, "particle number out of range");
  return sectors_[static_cast<std::size_t>(particles)].basis;
}

Matrix FockPropagator::sector_hamiltonian(int particles) const {
  const auto& basis = sector_basis(particles);
  const auto n = static_cast<Index>(basis.size());
  std::vector<Index> position(std::size_t{1} << modes_, -1);
  for (Index i = 0; i < n; ++i) position[basis[static_cast<std::size_t>(i)]] = i;

  Matrix hs = Matrix::Zero(n, n);
  for (Index col = 0; col < n; ++col) {
    const std::uint32_t x = basis[static_cast<std::size_t>(col)];
    for (int k = 0; k < modes_; ++k) {
      if (!(x & (std::uint32_t{1} << k))) continue;
      const std::uint32_t x1 = x ^ (std::uint32_t{1} << k);
      const double s1 = ordering_sign(x, k);
      for (int j = 0; j < modes_; ++j) {
        if (x1 & (std::uint32_t{1} << j)) continue;
        const Complex amp = h_(j, k);
        if (amp == Complex(0.0)) continue;
        const std::uint32_t y = x1 | (std::uint32_t{1} << j);
        hs(position[y], col) += amp * s1 * ordering_sign(x1, j);
      }
    }
  }
  return hs;
}

FockState FockPropagator::evolve(const FockState& psi, double t) const {
  detail::require(psi.modes() == modes_, "Fock state and Hamiltonian mode counts differ");
  Vector out = Vector::Zero(psi.amplitudes().size());
  for (const auto& sector : sectors_) {
    const auto n = static_cast<Index>(sector.basis.size());
    Vector c(n);
    for (Index i = 0; i < n; ++i) c(i) = psi.amplitudes()(sector.basis[static_cast<std::size_t>(i)]);
    if (c.squaredNorm() == 0.0) continue;
    Vector coeff = sector.vectors.adjoint() * c;
    for (Index i = 0; i < n; ++i) coeff(i) *= std::exp(Complex(0.0, -sector.energies(i) * t));
    const Vector evolved = sector.vectors * coeff;
    for (Index i = 0; i < n; ++i) out(sector.basis[static_cast<std::size_t>(i)]) = evolved(i);
  }
  const double norm = out.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw NumericalError("Fock evolution broke norm conservation: norm = " + std::to_string(norm));
  }
  return FockState(modes_, out / norm);
}

FockState evolve_fock(const FockState& psi, const HermitianMatrix& single_particle, double t) {
  return FockPropagator(single_particle).evolve(psi, t);
}

CovarianceMatrix fock_covariance(const FockState& psi) {
  const int n = psi.modes();
  Matrix c(n, n);
  for (int k = 0; k < n; ++k) {
    const Vector ak = apply_annihilation(psi.amplitudes(), n, k);
    for (int j = 0; j < n; ++j) {
      c(j, k) = psi.amplitudes().dot(apply_creation(ak, n, j));
    }
  }
  return CovarianceMatrix(HermitianMatrix(std::move(c), 1e-10));
}

Complex four_point(const FockState& psi, int i, int j, int k, int l) {
  const int n = psi.modes();
  Vector v = apply_annihilation(psi.amplitudes(), n, l);
  v = apply_annihilation(v, n, k);
  v = apply_creation(v, n, j);
  v = apply_creation(v, n, i);
  return psi.amplitudes().dot(v);
}

double particle_number(const FockState& psi) {
  double total = 0.0;
  for (Index x = 0; x < psi.amplitudes().size(); ++x) {
    total += std::norm(psi.amplitudes()(x)) * std::popcount(static_cast<std::uint32_t>(x));
  }
  return total;
}

Matrix reduced_density_matrix(const FockState& psi, const SubsystemSelection& subsystem) {
  const int n = psi.modes();
  detail::require(subsystem.indices().back() < n, "subsystem index out of range");
  std::vector<int> inside;
  std::vector<int> outside;
  for (int j = 0; j < n; ++j) (subsystem.contains(j) ? inside : outside).push_back(j);

  const Index dim_a = Index{1} << inside.size();
  const Index dim_b = Index{1} << outside.size();
  Matrix m = Matrix::Zero(dim_a, dim_b);
  for (Index x = 0; x < psi.amplitudes().size(); ++x) {
    const Complex amp = psi.amplitudes()(x);
    if (amp == Complex(0.0)) continue;
    const auto ux = static_cast<std::uint32_t>(x);
    Index xa = 0;
    Index xb = 0;
    int crossings = 0;
    int occupied_outside_so_far = 0;
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (int j = 0; j < n; ++j) {
      const bool occ = (ux >> j) & 1u;
      if (ia < inside.size() && inside[ia] == j) {
        if (occ) {
          xa |= Index{1} << ia;
          crossings += occupied_outside_so_far;
        }
        ++ia;
      } else {
        if (occ) {
          xb |= Index{1} << ib;
          ++occupied_outside_so_far;
        }
        ++ib;
      }
    }
    m(xa, xb) += (crossings % 2 == 0 ? 1.0 : -1.0) * amp;
  }
  return m * m.adjoint();
}

double fock_entropy(const FockState& psi, const SubsystemSelection& subsystem) {
  const Matrix rho = reduced_density_matrix(psi, subsystem);
  const RealVector p = eigvalsh(Matrix((rho + rho.adjoint()) * 0.5));
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > 1e-300) s -= p(i) * std::log2(p(i));
  }
  return s;
}

}  // namespace ffpage::oracle
