#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ffpage/error.hpp"
#include "ffpage/linalg.hpp"
#include "ffpage/parallel.hpp"
#include "generators.hpp"

using namespace ffpage;
using ffpage::testing::random_hermitian;

namespace {

double reconstruction_error(const HermitianMatrix& m, const EigenDecomposition& e) {
  const Matrix v = e.vectors.matrix();
  const Matrix back = v * e.values.cast<Complex>().asDiagonal() * v.adjoint();
  return (back - m.matrix()).norm() / std::max(1e-300, m.matrix().norm());
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("eigh on small matrices with known spectra") {
  const auto id = eigh(HermitianMatrix::identity(3));
  CHECK(id.values.isApprox(RealVector::Ones(3)));
  CHECK(id.vectors.unitarity_defect() < 1e-12);

  RealVector d(2);
  d << 0.2, 0.8;
  const auto diag = eigh(HermitianMatrix::diagonal(d));
  CHECK(diag.values(0) == doctest::Approx(0.2));
  CHECK(diag.values(1) == doctest::Approx(0.8));

  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const auto pauli = eigh(HermitianMatrix(x));
  CHECK(pauli.values(0) == doctest::Approx(-1.0));
  CHECK(pauli.values(1) == doctest::Approx(1.0));
}

TEST_CASE("eigh reconstructs random Hermitian matrices up to dimension 400") {
  RandomStream rng(101);
  for (Index dim : {1, 2, 7, 40, 133, 400}) {
    const HermitianMatrix m = random_hermitian(dim, rng);
    const auto e = eigh(m);
    CHECK(reconstruction_error(m, e) < 1e-9);
    CHECK(e.vectors.unitarity_defect() < 1e-10);
    for (Index i = 1; i < dim; ++i) CHECK(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("Hermitian construction symmetrizes roundoff and rejects real asymmetry") {
  Matrix m(2, 2);
  m << 1.0, Complex(0.5, 1e-14), Complex(0.5, 0.0), 2.0;
  const HermitianMatrix h(m);
  CHECK(h(0, 1) == std::conj(h(1, 0)));

  m(0, 1) = Complex(0.7, 0.0);
  CHECK_THROWS_AS(HermitianMatrix{m}, ValidationError);
  CHECK_THROWS_AS(HermitianMatrix{Matrix(2, 3)}, ValidationError);
  CHECK_THROWS_AS(HermitianMatrix{Matrix(0, 0)}, ValidationError);
}

TEST_CASE("unitary construction validates") {
  Matrix m = Matrix::Identity(3, 3);
  CHECK_NOTHROW(UnitaryMatrix{m});
  m(0, 0) = 1.01;
  CHECK_THROWS_AS(UnitaryMatrix{m}, ValidationError);
}

TEST_CASE("Haar samples are unitary; dim 0 is rejected") {
  RandomStream rng(5);
  CHECK_THROWS_AS(sample_haar_unitary(0, rng), ValidationError);
  for (Index dim : {1, 2, 3, 10, 64, 200}) {
    for (int rep = 0; rep < 3; ++rep) {
      CHECK(sample_haar_unitary(dim, rng).unitarity_defect() < 1e-10);
    }
  }
}

TEST_CASE("U(1) samples have unit modulus and a uniform phase") {
  const RandomStream root(77);
  constexpr std::size_t n = 20000;
  std::vector<double> phases(n);
  double mean_cos = 0.0;
  double mean_sin = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    RandomStream rng = root.split(s);
    const Complex u = sample_haar_unitary(1, rng)(0, 0);
    CHECK(std::abs(std::abs(u) - 1.0) < 1e-14);
    phases[s] = (std::arg(u) + M_PI) / (2.0 * M_PI);
    mean_cos += u.real() / n;
    mean_sin += u.imag() / n;
  }
  // E cos = E sin = 0 with per-sample variance 1/2.
  const double se = std::sqrt(0.5 / n);
  CHECK(std::abs(mean_cos) < 4.0 * se);
  CHECK(std::abs(mean_sin) < 4.0 * se);
  // One-sample KS against U(0, 1), 1% critical value 1.63 / sqrt(n).
  std::sort(phases.begin(), phases.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d = std::max({d, std::abs(phases[i] - static_cast<double>(i) / n),
                  std::abs(phases[i] - static_cast<double>(i + 1) / n)});
  }
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Haar first and second moments at dim 4") {
  const RandomStream root(2024);
  constexpr std::size_t n = 100000;
  std::vector<double> sq(n);
  std::vector<double> re(n);
  std::vector<double> im(n);
  for (std::size_t s = 0; s < n; ++s) {
    RandomStream rng = root.split(s);
    const Complex u00 = sample_haar_unitary(4, rng)(0, 0);
    sq[s] = std::norm(u00);
    re[s] = u00.real();
    im[s] = u00.imag();
  }
  const auto s2 = summarize(sq);
  CHECK(std::abs(s2.mean - 0.25) < 3.0 * s2.stderr_mean);
  const auto sr = summarize(re);
  const auto si = summarize(im);
  CHECK(std::abs(sr.mean) < 3.0 * sr.stderr_mean);
  CHECK(std::abs(si.mean) < 3.0 * si.stderr_mean);
}

TEST_CASE("left multiplication by a fixed unitary leaves |U_00|^2 distributed the same") {
  RandomStream wrng(9);
  const UnitaryMatrix w = sample_haar_unitary(5, wrng);
  const RandomStream a(31);
  const RandomStream b(32);
  constexpr std::size_t n = 10000;
  std::vector<double> plain(n);
  std::vector<double> rotated(n);
  for (std::size_t s = 0; s < n; ++s) {
    RandomStream ra = a.split(s);
    RandomStream rb = b.split(s);
    plain[s] = std::norm(sample_haar_unitary(5, ra)(0, 0));
    rotated[s] = std::norm((w.matrix() * sample_haar_unitary(5, rb).matrix())(0, 0));
  }
  // 1% critical value of the two-sample statistic: 1.628 sqrt(2 / n).
  CHECK(ks_statistic(plain, rotated) < 1.628 * std::sqrt(2.0 / n));
}

TEST_CASE("Haar columns are the leading columns of the full sample") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RandomStream r1(seed);
    RandomStream r2(seed);
    const Matrix cols = sample_haar_columns(12, 5, r1);
    const UnitaryMatrix full = sample_haar_unitary(12, r2);
    CHECK((cols - full.matrix().leftCols(5)).norm() < 1e-12);
  }
}

TEST_CASE("conjugate") {
  RandomStream rng(4);
  const HermitianMatrix m = random_hermitian(6, rng);
  const UnitaryMatrix u = sample_haar_unitary(6, rng);

  CHECK((conjugate(UnitaryMatrix::identity(6), m).matrix() - m.matrix()).norm() < 1e-14);
  CHECK((conjugate(u, HermitianMatrix::identity(6)).matrix() - Matrix::Identity(6, 6)).norm() < 1e-12);

  const HermitianMatrix c = conjugate(u, m);
  CHECK(std::abs(c.matrix().trace() - m.matrix().trace()) < 1e-10);
  CHECK((eigvalsh(c) - eigvalsh(m)).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(conjugate(UnitaryMatrix::identity(3), m), ValidationError);
}
