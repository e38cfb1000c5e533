#include <doctest.h>

#include <cmath>
#include <vector>

#include "ffpage/error.hpp"
#include "ffpage/parallel.hpp"
#include "ffpage/rfg_ensemble.hpp"
#include "generators.hpp"

using namespace ffpage;
using namespace ffpage::testing;

namespace {

// Second moments of C = U P_m U^dagger from the Dirichlet law of a Haar row:
// <C_11^2> = m (m + 1) / (N (N + 1)) and <Tr C^2> = m fix alpha and beta.
AlphaBeta dirichlet_alpha_beta(double n, double m) {
  const double diag2 = m * (m + 1.0) / (n * (n + 1.0));
  const double alpha = (m - n * diag2) / (n * n - n);
  return {alpha, diag2 - alpha};
}

}  // namespace

TEST_CASE("ensemble configs are validated") {
  CHECK_NOTHROW(EnsembleConfig{4, 0, 1, 1}.validate());
  CHECK_NOTHROW(EnsembleConfig{4, 4, 1, 1}.validate());
  CHECK_THROWS_AS(EnsembleConfig({4, 5, 1, 1}).validate(), ValidationError);
  CHECK_THROWS_AS(EnsembleConfig({4, 2, 0, 1}).validate(), ValidationError);
  CHECK_THROWS_AS(EnsembleConfig({0, 0, 1, 1}).validate(), ValidationError);
  CHECK_THROWS_AS(sample_reduced_covariance(EnsembleConfig{4, 2, 1, 1}, 5, 0), ValidationError);
}

TEST_CASE("empty and full fillings are pure and trivial") {
  const auto full = sample_covariance(EnsembleConfig{6, 6, 1, 9}, 0);
  CHECK((full.matrix() - Matrix::Identity(6, 6)).norm() < 1e-12);
  const auto empty = sample_covariance(EnsembleConfig{6, 0, 1, 9}, 0);
  CHECK(empty.matrix().norm() < 1e-12);
  CHECK(entropy(reduce(full, SubsystemSelection::prefix(3))) == doctest::Approx(0.0));
}

TEST_CASE("property: samples are rank-m projectors") {
  RandomStream rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const Index n = uniform_index(rng, 1, 20);
    const Index m = uniform_index(rng, 0, n);
    const EnsembleConfig cfg{n, m, 1, rng()};
    const auto c = sample_covariance(cfg, static_cast<std::uint64_t>(rep));
    CHECK(c.purity_defect() < 1e-10);
    CHECK(std::abs(c.matrix().trace() - Complex(static_cast<double>(m))) < 1e-10);
    // Pure state: S(first N_A) equals S(last N - N_A) sample by sample.
    if (n >= 2) {
      const Index na = uniform_index(rng, 1, n - 1);
      CHECK(entropy(reduce(c, SubsystemSelection::prefix(na))) ==
            doctest::Approx(entropy(reduce(c, SubsystemSelection::range(na, n)))).epsilon(1e-8));
    }
    CHECK(entropy(c) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("sampling depends only on seed and index") {
  const EnsembleConfig cfg{10, 5, 4, 77};
  CHECK(sample_covariance(cfg, 3).matrix() == sample_covariance(cfg, 3).matrix());
  CHECK(sample_covariance(cfg, 3).matrix() != sample_covariance(cfg, 2).matrix());
  const EnsembleConfig other{10, 5, 4, 78};
  CHECK(sample_covariance(cfg, 3).matrix() != sample_covariance(other, 3).matrix());
}

TEST_CASE("alpha and beta against the Dirichlet oracle") {
  for (auto [n, m] : {std::pair<Index, Index>{2, 1}, {4, 2}, {8, 3}, {16, 8}, {200, 100}, {7, 0}}) {
    const auto code = moment_alpha_beta(n, m);
    const auto ref = dirichlet_alpha_beta(static_cast<double>(n), static_cast<double>(m));
    CHECK(code.alpha == doctest::Approx(ref.alpha).epsilon(1e-13));
    CHECK(code.beta == doctest::Approx(ref.beta).epsilon(1e-13));
  }
  const auto ab = moment_alpha_beta(4, 2);
  CHECK(ab.alpha == doctest::Approx(4.0 / 60.0));
  CHECK(ab.beta == doctest::Approx(14.0 / 60.0));
  CHECK_THROWS_AS(moment_alpha_beta(1, 1), ValidationError);
}

TEST_CASE("Monte-Carlo first and second moments") {
  constexpr std::size_t samples = 100000;
  for (auto [n, m, na] : {std::tuple<Index, Index, Index>{4, 2, 2}, {8, 4, 3}, {16, 8, 5}}) {
    const EnsembleConfig cfg{n, m, samples, 1234};
    std::vector<double> diag(samples), off(samples), purity(samples);
    parallel_for(samples, [&](std::size_t s) {
      const auto ca = sample_reduced_covariance(cfg, na, s);
      diag[s] = ca.matrix()(0, 0).real();
      off[s] = ca.matrix()(0, 1).real();
      purity[s] = (ca.matrix() * ca.matrix()).trace().real();
    });
    const auto ab = dirichlet_alpha_beta(static_cast<double>(n), static_cast<double>(m));
    const double nad = static_cast<double>(na);
    const auto d = summarize(diag);
    const auto o = summarize(off);
    const auto p = summarize(purity);
    CHECK(std::abs(d.mean - static_cast<double>(m) / static_cast<double>(n)) < 4 * d.stderr_mean);
    CHECK(std::abs(o.mean) < 4 * o.stderr_mean);
    CHECK(std::abs(p.mean - (ab.alpha * nad * nad + ab.beta * nad)) < 4 * p.stderr_mean);
  }
}

TEST_CASE("reduced and full samplers agree in distribution") {
  const EnsembleConfig cfg{12, 6, 20000, 55};
  const auto reduced = entropy_statistics(cfg, 4);
  const auto full = rfg_page_curve(cfg, {4}).stats.front();
  const double se = std::hypot(reduced.std_error, full.std_error);
  CHECK(std::abs(reduced.mean_entropy - full.mean_entropy) < 4 * se);
  CHECK(reduced.variance_entropy / full.variance_entropy == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("Page curve is pure at N_A = N and statistically reflection symmetric") {
  const EnsembleConfig cfg{20, 10, 4000, 8};
  const auto curve = rfg_page_curve(cfg, {6, 14, 20});
  CHECK(curve.curve.points[2].entropy == doctest::Approx(0.0).scale(1.0));
  const auto& a = curve.stats[0];
  const auto& b = curve.stats[1];
  CHECK(std::abs(a.mean_entropy - b.mean_entropy) < 4 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("results do not depend on the thread count") {
  const EnsembleConfig cfg{16, 8, 64, 3};
  set_thread_count(1);
  const auto one = rfg_page_curve(cfg, {3, 8}, true);
  const auto conc1 = concentration_experiment(cfg, 4, {0.1, 0.5}, BoundKind::kEntropyAtypicality);
  set_thread_count(3);
  const auto three = rfg_page_curve(cfg, {3, 8}, true);
  const auto conc3 = concentration_experiment(cfg, 4, {0.1, 0.5}, BoundKind::kEntropyAtypicality);
  set_thread_count(0);
  for (std::size_t p = 0; p < 2; ++p) {
    CHECK(one.stats[p].entropies == three.stats[p].entropies);
    CHECK(one.stats[p].mean_entropy == three.stats[p].mean_entropy);
  }
  CHECK(conc1.empirical_tail == conc3.empirical_tail);
}

TEST_CASE("four times the samples halves the standard error") {
  const auto small = entropy_statistics(EnsembleConfig{20, 10, 5000, 17}, 5);
  const auto large = entropy_statistics(EnsembleConfig{20, 10, 20000, 18}, 5);
  CHECK(large.std_error / small.std_error == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("small-fraction series") {
  CHECK(series_rfg(0.0) == 0.0);
  const double f = 0.3;
  CHECK(series_rfg(f) ==
        doctest::Approx(f - (f * f / 2 + f * f * f / 6 + f * f * f * f / 12) / std::log(2.0)));
  CHECK(series_rfg(0.5) == doctest::Approx(0.282093).epsilon(1e-6));
  CHECK_THROWS_AS(series_rfg(0.6), ValidationError);
}

TEST_CASE("bound constants and thresholds") {
  const auto p = bound_parameters(BoundKind::kCovarianceTypicality, 41, 10);
  CHECK(p.center == doctest::Approx(std::sqrt(100.0 / 80.0)));
  CHECK(p.scale == doctest::Approx(12.0 / 41.0));
  CHECK(event_threshold(BoundKind::kCovarianceTypicality, 41, 10, 0.1) ==
        doctest::Approx(p.center + 0.2));
  CHECK(analytic_bound(BoundKind::kCovarianceTypicality, 41, 10, 0.1) ==
        doctest::Approx(2.0 * std::exp(-0.01 / p.scale)));

  const auto xi = bound_parameters(BoundKind::kEntropyTypicality, 40, 10);
  CHECK(analytic_bound(BoundKind::kEntropyTypicality, 40, 10, 0.5 * xi.center * xi.center) == 1.0);
  const double eps = 2.0 * xi.center * xi.center;
  const double x = std::sqrt(eps) - xi.center;
  CHECK(analytic_bound(BoundKind::kEntropyTypicality, 40, 10, eps) ==
        doctest::Approx(2.0 * std::exp(-x * x / xi.scale)));

  const auto xa = bound_parameters(BoundKind::kEntropyAtypicality, 40, 10);
  CHECK(xa.center == doctest::Approx(100.0 / (2.0 * std::log(2.0) * 41.0)));
  CHECK(event_threshold(BoundKind::kEntropyAtypicality, 40, 10, 0.3) ==
        doctest::Approx(10.0 - xa.center + 0.3));
  CHECK(parse_bound_kind(to_string(BoundKind::kCovarianceAtypicality)) ==
        BoundKind::kCovarianceAtypicality);
  CHECK_THROWS_AS((void)parse_bound_kind("nope"), ValidationError);
  CHECK_THROWS_AS(analytic_bound(BoundKind::kEntropyAtypicality, 40, 10, 0.0), ValidationError);
}

TEST_CASE("concentration bounds hold on default grids") {
  const EnsembleConfig cfg = EnsembleConfig::half_filling(40, 4000, 99);
  for (BoundKind kind : {BoundKind::kCovarianceTypicality, BoundKind::kCovarianceAtypicality,
                         BoundKind::kEntropyTypicality, BoundKind::kEntropyAtypicality}) {
    CAPTURE(to_string(kind));
    const auto grid = default_epsilon_grid(kind, 40, 10);
    const auto report = concentration_experiment(cfg, 10, grid, kind);
    CHECK(report.violation_count() == 0);
    CHECK(report.binding_count() >= 3);
    CHECK(report.binding_count() < grid.size());
  }
  CHECK_THROWS_AS(concentration_experiment(EnsembleConfig{40, 10, 10, 1}, 10, {0.1},
                                           BoundKind::kEntropyAtypicality),
                  ValidationError);
}

TEST_CASE("log-log fits") {
  const std::vector<double> x{10, 20, 40, 80};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  const auto exact = fit_loglog_slope(x, y);
  CHECK(exact.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::exp(exact.intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(exact.slope_stderr < 1e-10);
  CHECK_FALSE(exact.weighted);

  const auto flat = fit_loglog_slope(x, {2.0, 2.0, 2.0, 2.0}, {0.1, 0.1, 0.1, 0.1});
  CHECK(flat.slope == doctest::Approx(0.0).scale(1.0));
  CHECK(flat.weighted);
  // Equal relative errors r: slope se = r / sqrt(Sxx).
  double mean = 0.0;
  for (double v : x) mean += std::log(v) / 4.0;
  double sxx = 0.0;
  for (double v : x) sxx += std::pow(std::log(v) - mean, 2);
  CHECK(flat.slope_stderr == doctest::Approx(0.05 / std::sqrt(sxx)).epsilon(1e-10));

  CHECK_THROWS_AS(fit_loglog_slope({1, 2}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(fit_loglog_slope({1, 2, 3}, {1, -2, 3}), ValidationError);
}

TEST_CASE("variance at fixed N_A decays with N") {
  const auto vs = variance_scaling({20, 40, 80}, 2, 4000, 11);
  REQUIRE(vs.points.size() == 3);
  CHECK(vs.points[0].variance > vs.points[2].variance);
  CHECK(vs.fit.slope < -1.0);
  CHECK_THROWS_AS(variance_scaling({20, 40}, 2, 100, 1), ValidationError);
}
