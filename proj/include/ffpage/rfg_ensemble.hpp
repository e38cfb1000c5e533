#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ffpage/gaussian_state.hpp"
#include "ffpage/page_curve.hpp"

namespace ffpage {

/// Random fermionic Gaussian ensemble C = U C0 U^dagger, U Haar on U(N),
/// C0 = diag(1, ..., 1, 0, ..., 0) with `particles` ones.
struct EnsembleConfig {
  Index modes = 0;
  Index particles = 0;
  std::size_t samples = 1;
  std::uint64_t seed = 0;

  static EnsembleConfig half_filling(Index modes, std::size_t samples, std::uint64_t seed);

  /// 0 <= particles <= modes, modes >= 1, samples >= 1.
  void validate() const;
};

/// Random stream owned by sample `sample_index`; depends only on the seed.
[[nodiscard]] RandomStream sample_stream(const EnsembleConfig& cfg, std::uint64_t sample_index);

/// Full N x N sample.
CovarianceMatrix sample_covariance(const EnsembleConfig& cfg, std::uint64_t sample_index);

/// Reduced covariance on the first `subsystem_size` modes, drawn from the same
/// distribution as reduce(sample_covariance(...), prefix) without forming the
/// N x N matrix: with W Haar, C_A = (P W Pi_A^dagger)^dagger (P W Pi_A^dagger),
/// which only needs the first N_A columns of W. Not sample-by-sample equal to
/// the full sampler.
CovarianceMatrix sample_reduced_covariance(const EnsembleConfig& cfg, Index subsystem_size,
                                           std::uint64_t sample_index);

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
};

/// <(C_A)_{ij} (C_A)_{kl}> = alpha delta_il delta_jk + beta delta_ij delta_kl,
/// so <Tr C_A^2> = alpha N_A^2 + beta N_A.
AlphaBeta moment_alpha_beta(Index modes, Index particles);

struct EnsembleStats {
  Index subsystem_size = 0;
  std::size_t samples = 0;
  double mean_entropy = 0.0;
  double variance_entropy = 0.0;
  double std_error = 0.0;  ///< sqrt(variance / samples)
  std::vector<double> entropies;  ///< empty unless requested
};

struct RfgCurve {
  PageCurve curve;
  std::vector<EnsembleStats> stats;  ///< one per curve point
};

/// Monte-Carlo Page curve over the first N_A modes of full samples.
RfgCurve rfg_page_curve(const EnsembleConfig& cfg, std::vector<Index> subsystem_sizes,
                        bool keep_samples = false);

/// Monte-Carlo entropy statistics at a single N_A using the reduced sampler.
EnsembleStats entropy_statistics(const EnsembleConfig& cfg, Index subsystem_size,
                                 bool keep_samples = false);

/// f - (f^2/2 + f^3/6 + f^4/12) / ln 2, truncated at O(f^5); 0 <= f <= 1/2.
double series_rfg(double f);

enum class BoundKind {
  kCovarianceTypicality,   ///< P(d >= eta + 2 eps) <= 2 exp(-eps^2 / eta')
  kCovarianceAtypicality,  ///< P(d^2 <= eta_a - 2 eps) <= 2 exp(-eps^2 / eta'_a)
  kEntropyTypicality,      ///< P(S <= N_A - eps) <= 2 exp(-(sqrt(eps) - xi)^2 / xi'), eps > xi^2
  kEntropyAtypicality,     ///< P(S >= N_A - xi_a + eps) <= 2 exp(-eps^2 / xi'_a)
};

[[nodiscard]] std::string_view to_string(BoundKind kind);
[[nodiscard]] BoundKind parse_bound_kind(std::string_view name);

/// Constants entering one bound; d is the Hilbert-Schmidt distance of C_A
/// from I/2.
struct BoundParameters {
  double center = 0.0;  ///< eta, eta_a, xi or xi_a
  double scale = 0.0;   ///< eta', eta'_a, xi' or xi'_a
};

BoundParameters bound_parameters(BoundKind kind, Index modes, Index subsystem_size);

/// Right-hand side of the bound at `epsilon`. For the entropy-typicality bound
/// outside its domain eps > xi^2 the bound is reported as 1 (no statement).
double analytic_bound(BoundKind kind, Index modes, Index subsystem_size, double epsilon);

/// Event threshold: d, d^2 or S is compared against this value.
double event_threshold(BoundKind kind, Index modes, Index subsystem_size, double epsilon);

struct ConcentrationReport {
  BoundKind kind = BoundKind::kCovarianceTypicality;
  Index modes = 0;
  Index subsystem_size = 0;
  std::size_t samples = 0;
  std::vector<double> epsilon;
  std::vector<double> threshold;
  std::vector<double> empirical_tail;
  std::vector<double> analytic_bound;
  std::vector<double> binomial_stderr;  ///< sqrt(p (1 - p) / n), p = min(bound, 1)
  std::vector<bool> in_domain;
  std::vector<bool> violated;  ///< empirical > bound + 3 binomial_stderr

  [[nodiscard]] std::size_t violation_count() const;
  /// Grid points where the bound is below 1.
  [[nodiscard]] std::size_t binding_count() const;
};

/// Empirical tail frequencies at half filling against the analytic bound.
ConcentrationReport concentration_experiment(const EnsembleConfig& cfg, Index subsystem_size,
                                             const std::vector<double>& epsilon_grid,
                                             BoundKind kind);

struct BoundRequest {
  BoundKind kind = BoundKind::kCovarianceTypicality;
  std::vector<double> epsilon;
};

/// Several bounds evaluated on one shared set of samples.
std::vector<ConcentrationReport> concentration_experiments(const EnsembleConfig& cfg,
                                                          Index subsystem_size,
                                                          const std::vector<BoundRequest>& requests);

/// Grid of multiples of the epsilon at which the bound equals 1, so that it
/// covers both the vacuous and the binding regime.
std::vector<double> default_epsilon_grid(BoundKind kind, Index modes, Index subsystem_size);

struct LogLogFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  bool weighted = false;
};

/// Least-squares line through (log x, log y). With `sigma_y` (absolute
/// standard errors of y) the fit is weighted by 1 / (sigma_y / y)^2 and the
/// slope error comes from the weights; otherwise ordinary least squares with
/// the residual-based error. Needs >= 3 points.
LogLogFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<double>& sigma_y = {});

struct VariancePoint {
  Index modes = 0;
  double variance = 0.0;
  double stderr_variance = 0.0;
};

struct VarianceScaling {
  Index subsystem_size = 0;
  std::size_t samples = 0;
  std::vector<VariancePoint> points;
  LogLogFit fit;
};

/// Var(S_A) at fixed N_A across system sizes (half filling) and the fitted
/// log-log slope.
VarianceScaling variance_scaling(const std::vector<Index>& modes, Index subsystem_size,
                                 std::size_t samples, std::uint64_t seed);

}  // namespace ffpage
