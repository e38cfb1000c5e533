#pragma once

// Hand-rolled generators for the property tests. Every generator draws from a
// RandomStream, so a failing case is reproducible from its seed and index.

#include <cmath>
#include <random>
#include <vector>

#include "ffpage/gaussian_state.hpp"
#include "ffpage/linalg.hpp"
#include "ffpage/quench.hpp"
#include "ffpage/random.hpp"

namespace ffpage::testing {

inline double uniform(RandomStream& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_index(RandomStream& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline HermitianMatrix random_hermitian(Index dim, RandomStream& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix a(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) a(i, j) = Complex(normal(rng), normal(rng));
  }
  return HermitianMatrix(Matrix((a + a.adjoint()) * 0.5));
}

/// U diag(spectrum) U^dagger with U Haar.
inline CovarianceMatrix covariance_with_spectrum(const RealVector& spectrum, RandomStream& rng) {
  const UnitaryMatrix u = sample_haar_unitary(spectrum.size(), rng);
  return CovarianceMatrix(conjugate(u, HermitianMatrix::diagonal(spectrum)));
}

inline CovarianceMatrix random_covariance(Index dim, RandomStream& rng, double lo = 0.0,
                                          double hi = 1.0) {
  RealVector spectrum(dim);
  for (Index i = 0; i < dim; ++i) spectrum(i) = uniform(rng, lo, hi);
  return covariance_with_spectrum(spectrum, rng);
}

/// Period-2 spec with 1 to 3 random complex hopping terms.
inline HamiltonianSpec random_spec(Index modes, RandomStream& rng) {
  HamiltonianSpec spec;
  spec.modes = modes;
  spec.name = "random";
  const Index terms = uniform_index(rng, 1, 3);
  for (Index t = 0; t < terms; ++t) {
    Hopping h;
    h.range = uniform_index(rng, 1, modes - 1);
    h.even_amplitude = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    h.odd_amplitude = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    spec.hoppings.push_back(h);
  }
  return spec;
}

}  // namespace ffpage::testing
