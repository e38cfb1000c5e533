#pragma once

#include <span>
#include <vector>

#include "ffpage/linalg.hpp"

namespace ffpage {

/// Window around [0, 1] inside which covariance eigenvalues are clamped before
/// entropy evaluation. Anything further out is an error.
inline constexpr double kSpectrumClampWindow = 1e-8;

/// Covariance matrix C_ij = <a_i^dagger a_j> of a number-conserving fermionic
/// Gaussian state.
///
/// The constructor checks Hermiticity only (O(n^2)). The spectrum-in-[0, 1]
/// invariant needs an eigendecomposition; use `validated` for untrusted input.
/// `entropy` always checks it.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix entries);
  explicit CovarianceMatrix(HermitianMatrix entries) : m_(std::move(entries)) {}

  /// Also checks that every eigenvalue lies in [-1e-10, 1 + 1e-10].
  static CovarianceMatrix validated(Matrix entries);

  /// Fully mixed state I/2.
  static CovarianceMatrix maximally_mixed(Index dim);
  static CovarianceMatrix diagonal(const RealVector& occupations);

  [[nodiscard]] Index dim() const noexcept { return m_.dim(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_.matrix(); }
  [[nodiscard]] const HermitianMatrix& hermitian() const noexcept { return m_; }

  /// ||C^2 - C||_F
  [[nodiscard]] double purity_defect() const;

 private:
  HermitianMatrix m_;
};

/// Strictly increasing list of mode indices.
class SubsystemSelection {
 public:
  /// Validates ordering and non-emptiness; range is checked against a
  /// concrete state in `reduce`.
  explicit SubsystemSelection(std::vector<Index> indices);

  /// Modes [0, size).
  static SubsystemSelection prefix(Index size);
  /// Modes [begin, end).
  static SubsystemSelection range(Index begin, Index end);

  [[nodiscard]] std::span<const Index> indices() const noexcept { return indices_; }
  [[nodiscard]] Index size() const noexcept { return static_cast<Index>(indices_.size()); }
  [[nodiscard]] bool contains(Index mode) const;
  [[nodiscard]] bool is_prefix() const noexcept;

 private:
  std::vector<Index> indices_;
};

/// Principal submatrix of C on the selected modes.
CovarianceMatrix reduce(const CovarianceMatrix& c, const SubsystemSelection& subsystem);

/// Binary Shannon entropy in bits, with 0 log 0 = 0.
double binary_entropy(double p);

/// Entropy (bits) of a Gaussian state from its covariance spectrum. Values in
/// the clamp window around [0, 1] are clamped; values beyond it throw.
double entropy_from_spectrum(std::span<const double> eigenvalues);

/// Entanglement entropy of the reduced state, in bits.
double entropy(const CovarianceMatrix& reduced);

/// Hilbert-Schmidt distance sqrt(Tr (C1 - C2)^2).
double hs_distance(const CovarianceMatrix& c1, const CovarianceMatrix& c2);

/// hs_distance(C, I/2) without forming I/2.
double hs_distance_to_maximally_mixed(const CovarianceMatrix& c);

/// X = 2C - I.
HermitianMatrix x_transform(const CovarianceMatrix& c);

}  // namespace ffpage
