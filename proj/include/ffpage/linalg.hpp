#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ffpage/random.hpp"

namespace ffpage {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

/// Dense complex Hermitian matrix. Construction checks
/// |M_ij - conj(M_ji)| <= tolerance entrywise and stores the exactly
/// Hermitian part (M + M^dagger) / 2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix entries, double tolerance = kHermitianTolerance);

  static HermitianMatrix zero(Index dim);
  static HermitianMatrix identity(Index dim);
  static HermitianMatrix diagonal(const RealVector& diag);

  [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Complex operator()(Index i, Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Dense unitary matrix, U^dagger U = I within kUnitaryTolerance (Frobenius).
class UnitaryMatrix {
 public:
  /// Validating constructor.
  explicit UnitaryMatrix(Matrix entries, double tolerance = kUnitaryTolerance);

  static UnitaryMatrix identity(Index dim);

  /// Wraps a matrix the caller already knows to be unitary (output of a QR
  /// or eigen factorization) without the O(n^3) check.
  static UnitaryMatrix assume_unitary(Matrix entries);

  [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Complex operator()(Index i, Index j) const { return m_(i, j); }

  /// ||U^dagger U - I||_F
  [[nodiscard]] double unitarity_defect() const;

 private:
  UnitaryMatrix() = default;

  Matrix m_;
};

struct EigenDecomposition {
  RealVector values;  ///< ascending
  UnitaryMatrix vectors;
};

/// Full Hermitian eigendecomposition, M = V diag(values) V^dagger.
EigenDecomposition eigh(const HermitianMatrix& m);

/// Eigenvalues only (ascending).
RealVector eigvalsh(const HermitianMatrix& m);
RealVector eigvalsh(const Eigen::Ref<const Matrix>& hermitian);

/// First `cols` columns of a Haar-random unitary of dimension `rows`:
/// QR of an i.i.d. standard complex Gaussian rows x cols matrix with the
/// column phases fixed by the diagonal of R. Entries are drawn column-major,
/// so the result equals the leading columns of sample_haar_unitary(rows, rng)
/// for an identically positioned stream.
Matrix sample_haar_columns(Index rows, Index cols, RandomStream& rng);

/// Haar-random element of U(dim).
UnitaryMatrix sample_haar_unitary(Index dim, RandomStream& rng);

/// U M U^dagger.
HermitianMatrix conjugate(const UnitaryMatrix& u, const HermitianMatrix& m);

}  // namespace ffpage
