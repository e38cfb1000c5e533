#include "ffpage/linalg.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ffpage/error.hpp"

namespace ffpage {

HermitianMatrix::HermitianMatrix(Matrix entries, double tolerance) {
  detail::require(entries.rows() >= 1, "Hermitian matrix must have dim >= 1");
  detail::require(entries.rows() == entries.cols(), "Hermitian matrix must be square");
  double worst = 0.0;
  for (Index j = 0; j < entries.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(entries(i, j) - std::conj(entries(j, i))));
    }
  }
  if (!(worst <= tolerance)) {
    throw ValidationError("matrix is not Hermitian: max |M_ij - conj(M_ji)| = " +
                          std::to_string(worst));
  }
  m_ = (entries + entries.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::zero(Index dim) { return HermitianMatrix(Matrix::Zero(dim, dim)); }

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& diag) {
  return HermitianMatrix(diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

UnitaryMatrix::UnitaryMatrix(Matrix entries, double tolerance) : m_(std::move(entries)) {
  detail::require(m_.rows() >= 1 && m_.rows() == m_.cols(),
                  "unitary matrix must be square with dim >= 1");
  const double defect = unitarity_defect();
  if (!(defect < tolerance)) {
    throw ValidationError("matrix is not unitary: ||U^dagger U - I||_F = " +
                          std::to_string(defect));
  }
}

UnitaryMatrix UnitaryMatrix::identity(Index dim) {
  return assume_unitary(Matrix::Identity(dim, dim));
}

UnitaryMatrix UnitaryMatrix::assume_unitary(Matrix entries) {
  UnitaryMatrix u;
  u.m_ = std::move(entries);
  return u;
}

double UnitaryMatrix::unitarity_defect() const {
  return (m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())).norm();
}

EigenDecomposition eigh(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), UnitaryMatrix::assume_unitary(solver.eigenvectors())};
}

RealVector eigvalsh(const HermitianMatrix& m) { return eigvalsh(m.matrix()); }

RealVector eigvalsh(const Eigen::Ref<const Matrix>& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

Matrix sample_haar_columns(Index rows, Index cols, RandomStream& rng) {
  detail::require(rows >= 1, "Haar sampling requires dim >= 1");
  detail::require(cols >= 1 && cols <= rows, "Haar column count must lie in [1, dim]");

  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix z(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }

  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const auto& r = qr.matrixQR();
  // Make the factorization unique (R with positive diagonal): column j of Q
  // absorbs the phase of R_jj.
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

UnitaryMatrix sample_haar_unitary(Index dim, RandomStream& rng) {
  detail::require(dim >= 1, "Haar sampling requires dim >= 1");
  return UnitaryMatrix::assume_unitary(sample_haar_columns(dim, dim, rng));
}

HermitianMatrix conjugate(const UnitaryMatrix& u, const HermitianMatrix& m) {
  detail::require(u.dim() == m.dim(), "conjugate: dimension mismatch");
  Matrix out = u.matrix() * m.matrix() * u.matrix().adjoint();
  // Roundoff can leave a ~1e-16 anti-Hermitian part; the constructor removes it.
  return HermitianMatrix(std::move(out), 1e-9 * std::max(1.0, m.matrix().norm()));
}

}  // namespace ffpage
