#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ffpage/error.hpp"
#include "ffpage/quench.hpp"
#include "generators.hpp"

using namespace ffpage;
using namespace ffpage::testing;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// sum_k E_k^p n_k = Tr(h^p C0) for any eigenbasis of h.
void check_spectral_moments(const HamiltonianSpec& spec, const OccupationProfile& profile) {
  const Matrix h = build_single_particle(spec).matrix();
  const Matrix c0 = density_wave_covariance(spec.modes).matrix();
  Matrix hp = Matrix::Identity(spec.modes, spec.modes);
  for (int p = 0; p <= 4; ++p) {
    double lhs = 0.0;
    for (const auto& e : profile.entries) lhs += std::pow(e.energy, p) * e.occupation;
    const double rhs = (hp * c0).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
    hp = hp * h;
  }
}

}  // namespace

TEST_CASE("single-particle matrices") {
  const auto h = build_single_particle(HamiltonianSpec::minimal(4));
  CHECK(h(0, 1) == Complex(1.0));
  CHECK(h(3, 0) == Complex(1.0));
  CHECK(h(0, 2) == Complex(0.0));

  for (Index n : {6, 10, 16}) {
    RealVector expected(n);
    for (Index q = 0; q < n; ++q) expected(q) = 2.0 * std::cos(2.0 * kPi * q / n);
    std::sort(expected.data(), expected.data() + n);
    CHECK((eigvalsh(build_single_particle(HamiltonianSpec::minimal(n))) - expected).norm() < 1e-12);
  }

  const auto odd = build_single_particle(HamiltonianSpec::odd_range(8, 0.5));
  CHECK(odd(0, 3) == Complex(0.5));
  CHECK(odd(1, 4) == Complex(-0.5));
  const auto even = build_single_particle(HamiltonianSpec::even_range(8, 0.5, 2));
  CHECK(even(2, 4) == Complex(0.5));
  CHECK(even(3, 5) == Complex(-0.5));
  CHECK(even(6, 0) == Complex(0.5));
}

TEST_CASE("Hamiltonian specs are validated") {
  CHECK_THROWS_AS(HamiltonianSpec::minimal(5).validate(), ValidationError);
  CHECK_THROWS_AS(HamiltonianSpec::minimal(0).validate(), ValidationError);
  HamiltonianSpec bad = HamiltonianSpec::minimal(6);
  bad.hoppings.push_back({6, 1.0, 1.0});
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.hoppings.back().range = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("covariance evolution") {
  const auto c0 = density_wave_covariance(8);
  CHECK(c0.matrix()(0, 0) == Complex(1.0));
  CHECK(c0.matrix()(1, 1) == Complex(0.0));
  const auto h = build_single_particle(HamiltonianSpec::odd_range(8, 0.7));
  CHECK(max_abs(evolve_covariance(h, c0, 0.0).matrix() - c0.matrix()) < 1e-12);
  CHECK(max_abs(evolve_covariance(HermitianMatrix::zero(8), c0, 5.0).matrix() - c0.matrix()) < 1e-12);

  RandomStream rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const auto hr = random_hermitian(8, rng);
    const double t = uniform(rng, 0.0, 100.0);
    const auto c = evolve_covariance(hr, c0, t);
    CHECK(c.purity_defect() < 1e-10);
    CHECK(std::abs(c.matrix().trace() - Complex(4.0)) < 1e-10);
    // V = exp(i conj(h) t) from the eigendecomposition of conj(h).
    const auto dec = eigh(HermitianMatrix(Matrix(hr.matrix().conjugate())));
    Vector phases(8);
    for (Index a = 0; a < 8; ++a) phases(a) = std::exp(Complex(0.0, dec.values(a) * t));
    const Matrix v = dec.vectors.matrix() * phases.asDiagonal() * dec.vectors.matrix().adjoint();
    CHECK(max_abs(c.matrix() - v * c0.matrix() * v.adjoint()) < 1e-10);
  }
}

TEST_CASE("momentum correlator of the minimal model") {
  const Index n = 12;
  const auto h = build_single_particle(HamiltonianSpec::minimal(n));
  const double t = 2.3;
  const Matrix ct = momentum_correlator(evolve_covariance(h, density_wave_covariance(n), t));
  for (Index q = 0; q < n; ++q) {
    const double k = 2.0 * kPi * q / n;
    const Index qpi = (q + n / 2) % n;
    const Complex expected = 0.5 * std::exp(Complex(0.0, t * (2.0 * std::cos(k) - 2.0 * std::cos(k + kPi))));
    CHECK(std::abs(ct(q, q) - 0.5) < 1e-12);
    CHECK(std::abs(ct(q, qpi) - expected) < 1e-12);
    for (Index p = 0; p < n; ++p) {
      if (p != q && p != qpi) CHECK(std::abs(ct(q, p)) < 1e-12);
    }
  }
}

TEST_CASE("Bloch blocks reproduce the spectrum of h") {
  RandomStream rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 2 * uniform_index(rng, 2, 10);
    const auto spec = rep < 3 ? HamiltonianSpec::odd_range(n, 0.3 * rep) : random_spec(n, rng);
    std::vector<double> bands;
    for (Index q = 0; q < n / 2; ++q) {
      const Eigen::Matrix2cd b = bloch_block(spec, 2.0 * kPi * q / n);
      CHECK(max_abs(b - b.adjoint()) < 1e-12);
      const RealVector e = eigvalsh(Matrix(b));
      bands.push_back(e(0));
      bands.push_back(e(1));
    }
    std::sort(bands.begin(), bands.end());
    const RealVector full = eigvalsh(build_single_particle(spec));
    for (Index i = 0; i < n; ++i) CHECK(bands[static_cast<std::size_t>(i)] == doctest::Approx(full(i)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("conserved occupations of the preset models") {
  const auto minimal = conserved_occupations(HamiltonianSpec::minimal(16));
  CHECK(minimal.theorem2_satisfied);
  CHECK(minimal.max_deviation_from_half() < 1e-9);
  CHECK(std::any_of(minimal.entries.begin(), minimal.entries.end(),
                    [](const ModeOccupation& e) { return e.degenerate; }));
  check_spectral_moments(HamiltonianSpec::minimal(16), minimal);

  const auto odd_spec = HamiltonianSpec::odd_range(16, 0.5);
  const auto odd = conserved_occupations(odd_spec);
  CHECK(odd.theorem2_satisfied);
  check_spectral_moments(odd_spec, odd);

  const auto even_spec = HamiltonianSpec::even_range(16, 0.5);
  const auto even = conserved_occupations(even_spec);
  CHECK_FALSE(even.theorem2_satisfied);
  CHECK(even.max_deviation_from_half() > 0.1);
  check_spectral_moments(even_spec, even);

  for (const auto& e : even.entries) {
    CHECK(e.eta == doctest::Approx(std::sqrt(e.occupation * (1.0 - e.occupation))));
  }
  CHECK(minimal.entries.size() == 16);
  for (std::size_t i = 1; i < 16; ++i) CHECK(minimal.entries[i].momentum > minimal.entries[i - 1].momentum);
}

TEST_CASE("property: occupations pair up as n and 1 - n and carry the conserved moments") {
  RandomStream rng(43);
  for (int rep = 0; rep < 40; ++rep) {
    const Index n = 2 * uniform_index(rng, 2, 12);
    const auto spec = random_spec(n, rng);
    const auto profile = conserved_occupations(spec);
    CHECK_NOTHROW(profile.validate());
    const std::size_t half = static_cast<std::size_t>(n / 2);
    for (std::size_t q = 0; q < half; ++q) {
      CHECK(profile.entries[q].occupation + profile.entries[q + half].occupation ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
    check_spectral_moments(spec, profile);
  }
}

TEST_CASE("uniform occupations") {
  const auto p = uniform_occupations(8);
  CHECK(p.theorem2_satisfied);
  CHECK(p.entries.size() == 8);
  CHECK(p.entries[3].eta == doctest::Approx(0.5));
}

TEST_CASE("time sampling") {
  TimeGrid grid;
  grid.samples = 500;
  grid.seed = 5;
  const auto times = sample_times(grid);
  CHECK(times.size() == 500);
  CHECK(*std::min_element(times.begin(), times.end()) >= grid.t_min);
  CHECK(*std::max_element(times.begin(), times.end()) <= grid.t_max);
  CHECK(sample_times(grid) == times);
  grid.seed = 6;
  CHECK(sample_times(grid) != times);

  TimeGrid bad;
  bad.t_min = 5.0;
  bad.t_max = 5.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.t_max = 6.0;
  bad.samples = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK(parse_time_scheme(to_string(TimeScheme::kFrequencyPhaseEnsemble)) ==
        TimeScheme::kFrequencyPhaseEnsemble);
  CHECK_THROWS_AS((void)parse_time_scheme("random"), ValidationError);
}

TEST_CASE("phase matrices") {
  const auto h = build_single_particle(HamiltonianSpec::odd_range(12, 0.5));
  const auto c0 = density_wave_covariance(12);
  const CovariancePropagator prop(h, c0);
  CHECK(prop.frequency_class_count() > 0);
  CHECK(max_abs(prop.with_phases(Matrix::Ones(12, 12)).matrix() - c0.matrix()) < 1e-12);

  const double t = 17.5;
  Matrix phase(12, 12);
  const auto& e = prop.energies();
  for (Index a = 0; a < 12; ++a) {
    for (Index b = 0; b < 12; ++b) phase(a, b) = std::exp(Complex(0.0, (e(a) - e(b)) * t));
  }
  CHECK(max_abs(prop.with_phases(phase).matrix() - prop.at(t).matrix()) < 1e-11);
  CHECK(max_abs(prop.at(t).matrix() - evolve_covariance(h, c0, t).matrix()) < 1e-11);

  RandomStream rng(44);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix r = prop.random_phases(rng);
    CHECK(max_abs(r - r.adjoint()) < 1e-14);
    CHECK((r.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
    const auto c = prop.with_phases(r);
    CHECK(std::abs(c.matrix().trace() - Complex(6.0)) < 1e-10);
    const RealVector spec = eigvalsh(c.hermitian());
    CHECK(spec.minCoeff() > -1e-10);
    CHECK(spec.maxCoeff() < 1.0 + 1e-10);
  }
}
