#include "ffpage/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ffpage/error.hpp"

namespace ffpage {

CovarianceMatrix::CovarianceMatrix(Matrix entries) : m_(std::move(entries)) {}

CovarianceMatrix CovarianceMatrix::validated(Matrix entries) {
  CovarianceMatrix c(std::move(entries));
  const RealVector spectrum = eigvalsh(c.hermitian());
  constexpr double tol = 1e-10;
  if (spectrum.minCoeff() < -tol || spectrum.maxCoeff() > 1.0 + tol) {
    throw ValidationError("covariance spectrum outside [0, 1]: [" +
                          std::to_string(spectrum.minCoeff()) + ", " +
                          std::to_string(spectrum.maxCoeff()) + "]");
  }
  return c;
}

CovarianceMatrix CovarianceMatrix::maximally_mixed(Index dim) {
  return CovarianceMatrix(Matrix(Matrix::Identity(dim, dim) * 0.5));
}

CovarianceMatrix CovarianceMatrix::diagonal(const RealVector& occupations) {
  return CovarianceMatrix(HermitianMatrix::diagonal(occupations));
}

double CovarianceMatrix::purity_defect() const {
  return (matrix() * matrix() - matrix()).norm();
}

SubsystemSelection::SubsystemSelection(std::vector<Index> indices) : indices_(std::move(indices)) {
  detail::require(!indices_.empty(), "subsystem must contain at least one mode");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    detail::require(indices_[i] >= 0, "subsystem indices must be non-negative");
    if (i > 0) {
      detail::require(indices_[i] > indices_[i - 1], "subsystem indices must be strictly increasing");
    }
  }
}

SubsystemSelection SubsystemSelection::prefix(Index size) { return range(0, size); }

SubsystemSelection SubsystemSelection::range(Index begin, Index end) {
  detail::require(begin >= 0 && end > begin, "subsystem range must be non-empty");
  std::vector<Index> idx(static_cast<std::size_t>(end - begin));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = begin + static_cast<Index>(i);
  return SubsystemSelection(std::move(idx));
}

bool SubsystemSelection::contains(Index mode) const {
  return std::binary_search(indices_.begin(), indices_.end(), mode);
}

bool SubsystemSelection::is_prefix() const noexcept { return indices_.back() == size() - 1; }

CovarianceMatrix reduce(const CovarianceMatrix& c, const SubsystemSelection& subsystem) {
  const Index n = subsystem.size();
  detail::require(subsystem.indices().back() < c.dim(),
                  "subsystem index " + std::to_string(subsystem.indices().back()) +
                      " out of range for " + std::to_string(c.dim()) + " modes");
  if (subsystem.is_prefix()) return CovarianceMatrix(Matrix(c.matrix().topLeftCorner(n, n)));
  const auto idx = subsystem.indices();
  Matrix out(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) out(a, b) = c.matrix()(idx[a], idx[b]);
  }
  return CovarianceMatrix(std::move(out));
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double entropy_from_spectrum(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < -kSpectrumClampWindow || lambda > 1.0 + kSpectrumClampWindow) {
      throw ValidationError("covariance eigenvalue " + std::to_string(lambda) +
                            " outside [0, 1] beyond the clamp window");
    }
    s += binary_entropy(std::clamp(lambda, 0.0, 1.0));
  }
  return s;
}

double entropy(const CovarianceMatrix& reduced) {
  const RealVector spectrum = eigvalsh(reduced.hermitian());
  return entropy_from_spectrum(std::span<const double>(spectrum.data(), spectrum.size()));
}

double hs_distance(const CovarianceMatrix& c1, const CovarianceMatrix& c2) {
  detail::require(c1.dim() == c2.dim(), "hs_distance: dimension mismatch");
  // Tr (A - B)^2 = sum |A_ij - B_ij|^2 for Hermitian A - B.
  return (c1.matrix() - c2.matrix()).norm();
}

double hs_distance_to_maximally_mixed(const CovarianceMatrix& c) {
  const Matrix& m = c.matrix();
  double off = m.squaredNorm();
  for (Index i = 0; i < m.rows(); ++i) {
    const double d = m(i, i).real();
    off += (d - 0.5) * (d - 0.5) - std::norm(m(i, i));
  }
  return std::sqrt(std::max(off, 0.0));
}

HermitianMatrix x_transform(const CovarianceMatrix& c) {
  return HermitianMatrix(Matrix(2.0 * c.matrix() - Matrix::Identity(c.dim(), c.dim())));
}

}  // namespace ffpage
