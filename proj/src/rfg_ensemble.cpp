#include "ffpage/rfg_ensemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "ffpage/error.hpp"
#include "ffpage/parallel.hpp"

namespace ffpage {
namespace {

constexpr double kLn2 = std::numbers::ln2;

double to_double(Index i) { return static_cast<double>(i); }

void require_half_filling(const EnsembleConfig& cfg) {
  detail::require(cfg.modes % 2 == 0 && 2 * cfg.particles == cfg.modes,
                  "concentration bounds are stated at half filling (particles = modes / 2)");
}

bool event_occurs(BoundKind kind, double statistic, double threshold) {
  switch (kind) {
    case BoundKind::kCovarianceTypicality:
    case BoundKind::kEntropyAtypicality:
      return statistic >= threshold;
    case BoundKind::kCovarianceAtypicality:
    case BoundKind::kEntropyTypicality:
      return statistic <= threshold;
  }
  return false;
}

}  // namespace

EnsembleConfig EnsembleConfig::half_filling(Index modes, std::size_t samples, std::uint64_t seed) {
  return EnsembleConfig{modes, modes / 2, samples, seed};
}

void EnsembleConfig::validate() const {
  detail::require(modes >= 1, "ensemble needs modes >= 1");
  detail::require(particles >= 0 && particles <= modes,
                  "particle number must lie in [0, modes]");
  detail::require(samples >= 1, "ensemble needs at least one sample");
}

RandomStream sample_stream(const EnsembleConfig& cfg, std::uint64_t sample_index) {
  return RandomStream(cfg.seed).split(stream_tag::kEnsemble).split(sample_index);
}

CovarianceMatrix sample_covariance(const EnsembleConfig& cfg, std::uint64_t sample_index) {
  cfg.validate();
  const Index n = cfg.modes;
  const Index m = cfg.particles;
  if (m == 0) return CovarianceMatrix(Matrix(Matrix::Zero(n, n)));
  if (m == n) return CovarianceMatrix(Matrix(Matrix::Identity(n, n)));
  RandomStream rng = sample_stream(cfg, sample_index);
  const UnitaryMatrix u = sample_haar_unitary(n, rng);
  const auto occupied = u.matrix().leftCols(m);
  return CovarianceMatrix(HermitianMatrix(Matrix(occupied * occupied.adjoint()), 1e-9));
}

CovarianceMatrix sample_reduced_covariance(const EnsembleConfig& cfg, Index subsystem_size,
                                           std::uint64_t sample_index) {
  cfg.validate();
  detail::require(subsystem_size >= 1 && subsystem_size <= cfg.modes,
                  "subsystem size must lie in [1, modes]");
  const Index na = subsystem_size;
  const Index m = cfg.particles;
  if (m == 0) return CovarianceMatrix(Matrix(Matrix::Zero(na, na)));
  if (m == cfg.modes) return CovarianceMatrix(Matrix(Matrix::Identity(na, na)));
  RandomStream rng = sample_stream(cfg, sample_index);
  const Matrix w = sample_haar_columns(cfg.modes, na, rng);
  const auto top = w.topRows(m);
  return CovarianceMatrix(HermitianMatrix(Matrix(top.adjoint() * top), 1e-9));
}

AlphaBeta moment_alpha_beta(Index modes, Index particles) {
  detail::require(modes >= 2, "moment_alpha_beta needs N >= 2");
  detail::require(particles >= 0 && particles <= modes, "particle number must lie in [0, N]");
  const double n = to_double(modes);
  const double m = to_double(particles);
  const double denom = n * (n * n - 1.0);
  return {(n * m - m * m) / denom, (n * m * m - m) / denom};
}

RfgCurve rfg_page_curve(const EnsembleConfig& cfg, std::vector<Index> subsystem_sizes,
                        bool keep_samples) {
  cfg.validate();
  const std::vector<Index> sizes = normalize_sizes(std::move(subsystem_sizes), cfg.modes);
  const std::size_t samples = cfg.samples;

  // entropies[p * samples + s]
  std::vector<double> entropies(sizes.size() * samples);
  parallel_for(samples, [&](std::size_t s) {
    const CovarianceMatrix c = sample_covariance(cfg, s);
    for (std::size_t p = 0; p < sizes.size(); ++p) {
      const Index na = sizes[p];
      const RealVector spectrum = eigvalsh(c.matrix().topLeftCorner(na, na));
      entropies[p * samples + s] =
          entropy_from_spectrum(std::span<const double>(spectrum.data(), spectrum.size()));
    }
  });

  RfgCurve out;
  out.curve.modes = cfg.modes;
  out.curve.source = CurveSource::kRfgMonteCarlo;
  out.curve.model = "rfg";
  out.curve.note = "particles=" + std::to_string(cfg.particles);
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    const std::span<const double> row(entropies.data() + p * samples, samples);
    const SampleSummary summary = summarize(row);
    EnsembleStats st;
    st.subsystem_size = sizes[p];
    st.samples = samples;
    st.mean_entropy = summary.mean;
    st.variance_entropy = summary.variance;
    st.std_error = summary.stderr_mean;
    if (keep_samples) st.entropies.assign(row.begin(), row.end());
    out.curve.points.push_back({sizes[p], st.mean_entropy, st.std_error});
    out.stats.push_back(std::move(st));
  }
  out.curve.validate();
  return out;
}

EnsembleStats entropy_statistics(const EnsembleConfig& cfg, Index subsystem_size,
                                 bool keep_samples) {
  cfg.validate();
  std::vector<double> values(cfg.samples);
  parallel_for(cfg.samples, [&](std::size_t s) {
    values[s] = entropy(sample_reduced_covariance(cfg, subsystem_size, s));
  });
  const SampleSummary summary = summarize(values);
  EnsembleStats st;
  st.subsystem_size = subsystem_size;
  st.samples = cfg.samples;
  st.mean_entropy = summary.mean;
  st.variance_entropy = summary.variance;
  st.std_error = summary.stderr_mean;
  if (keep_samples) st.entropies = std::move(values);
  return st;
}

double series_rfg(double f) {
  detail::require(f >= 0.0 && f <= 0.5, "series_rfg needs 0 <= f <= 1/2");
  const double f2 = f * f;
  return f - (f2 / 2.0 + f2 * f / 6.0 + f2 * f2 / 12.0) / kLn2;
}

namespace {

constexpr std::array<std::pair<BoundKind, std::string_view>, 4> kBoundNames{{
    {BoundKind::kCovarianceTypicality, "covariance-typicality"},
    {BoundKind::kCovarianceAtypicality, "covariance-atypicality"},
    {BoundKind::kEntropyTypicality, "entropy-typicality"},
    {BoundKind::kEntropyAtypicality, "entropy-atypicality"},
}};

}  // namespace

std::string_view to_string(BoundKind kind) {
  for (const auto& [k, name] : kBoundNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

BoundKind parse_bound_kind(std::string_view name) {
  for (const auto& [k, n] : kBoundNames) {
    if (n == name) return k;
  }
  throw ValidationError("unknown bound kind '" + std::string(name) + "'");
}

BoundParameters bound_parameters(BoundKind kind, Index modes, Index subsystem_size) {
  detail::require(modes >= 2, "concentration bounds need N >= 2");
  detail::require(subsystem_size >= 1 && subsystem_size <= modes, "N_A must lie in [1, N]");
  const double n = to_double(modes);
  const double na = to_double(subsystem_size);
  switch (kind) {
    case BoundKind::kCovarianceTypicality:
      return {std::sqrt(na * na / (2.0 * (n - 1.0))), 12.0 / n};
    case BoundKind::kCovarianceAtypicality:
      return {na * na / (4.0 * (n + 1.0)), 12.0 * na / n};
    case BoundKind::kEntropyTypicality:
      return {std::sqrt(2.0 * na * na / (n - 1.0)), 192.0 / n};
    case BoundKind::kEntropyAtypicality:
      return {na * na / (2.0 * kLn2 * (n + 1.0)), 192.0 * na / (kLn2 * kLn2 * n)};
  }
  return {};
}

double analytic_bound(BoundKind kind, Index modes, Index subsystem_size, double epsilon) {
  detail::require(epsilon > 0.0, "epsilon must be positive");
  const BoundParameters p = bound_parameters(kind, modes, subsystem_size);
  if (kind == BoundKind::kEntropyTypicality) {
    if (epsilon <= p.center * p.center) return 1.0;
    const double x = std::sqrt(epsilon) - p.center;
    return 2.0 * std::exp(-x * x / p.scale);
  }
  return 2.0 * std::exp(-epsilon * epsilon / p.scale);
}

double event_threshold(BoundKind kind, Index modes, Index subsystem_size, double epsilon) {
  const BoundParameters p = bound_parameters(kind, modes, subsystem_size);
  const double na = to_double(subsystem_size);
  switch (kind) {
    case BoundKind::kCovarianceTypicality:
      return p.center + 2.0 * epsilon;
    case BoundKind::kCovarianceAtypicality:
      return p.center - 2.0 * epsilon;
    case BoundKind::kEntropyTypicality:
      return na - epsilon;
    case BoundKind::kEntropyAtypicality:
      return na - p.center + epsilon;
  }
  return 0.0;
}

std::size_t ConcentrationReport::violation_count() const {
  return static_cast<std::size_t>(std::count(violated.begin(), violated.end(), true));
}

std::size_t ConcentrationReport::binding_count() const {
  return static_cast<std::size_t>(std::count_if(analytic_bound.begin(), analytic_bound.end(),
                                                [](double b) { return b < 1.0; }));
}

std::vector<ConcentrationReport> concentration_experiments(const EnsembleConfig& cfg,
                                                          Index subsystem_size,
                                                          const std::vector<BoundRequest>& requests) {
  cfg.validate();
  require_half_filling(cfg);
  detail::require(!requests.empty(), "no bounds requested");
  bool need_entropy = false;
  for (const auto& req : requests) {
    detail::require(!req.epsilon.empty(), "epsilon grid is empty");
    for (double e : req.epsilon) detail::require(e > 0.0, "epsilon grid values must be positive");
    need_entropy = need_entropy || req.kind == BoundKind::kEntropyTypicality ||
                   req.kind == BoundKind::kEntropyAtypicality;
  }

  // One set of samples serves every bound.
  std::vector<double> distance(cfg.samples);
  std::vector<double> entropies(need_entropy ? cfg.samples : 0);
  parallel_for(cfg.samples, [&](std::size_t s) {
    const CovarianceMatrix reduced = sample_reduced_covariance(cfg, subsystem_size, s);
    distance[s] = hs_distance_to_maximally_mixed(reduced);
    if (need_entropy) entropies[s] = entropy(reduced);
  });

  std::vector<ConcentrationReport> reports;
  const double n = static_cast<double>(cfg.samples);
  for (const auto& req : requests) {
    const BoundKind kind = req.kind;
    std::vector<double> statistic;
    switch (kind) {
      case BoundKind::kCovarianceTypicality:
        statistic = distance;
        break;
      case BoundKind::kCovarianceAtypicality:
        for (double d : distance) statistic.push_back(d * d);
        break;
      default:
        statistic = entropies;
    }
    ConcentrationReport r;
    r.kind = kind;
    r.modes = cfg.modes;
    r.subsystem_size = subsystem_size;
    r.samples = cfg.samples;
    const BoundParameters par = bound_parameters(kind, cfg.modes, subsystem_size);
    for (double eps : req.epsilon) {
      const double threshold = event_threshold(kind, cfg.modes, subsystem_size, eps);
      const auto hits = std::count_if(statistic.begin(), statistic.end(), [&](double x) {
        return event_occurs(kind, x, threshold);
      });
      const double tail = static_cast<double>(hits) / n;
      const double bound = analytic_bound(kind, cfg.modes, subsystem_size, eps);
      const double p = std::min(bound, 1.0);
      const double se = std::sqrt(p * (1.0 - p) / n);
      r.epsilon.push_back(eps);
      r.threshold.push_back(threshold);
      r.empirical_tail.push_back(tail);
      r.analytic_bound.push_back(bound);
      r.binomial_stderr.push_back(se);
      r.in_domain.push_back(kind != BoundKind::kEntropyTypicality || eps > par.center * par.center);
      r.violated.push_back(tail > bound + 3.0 * se);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

ConcentrationReport concentration_experiment(const EnsembleConfig& cfg, Index subsystem_size,
                                             const std::vector<double>& epsilon_grid,
                                             BoundKind kind) {
  return concentration_experiments(cfg, subsystem_size, {{kind, epsilon_grid}}).front();
}

std::vector<double> default_epsilon_grid(BoundKind kind, Index modes, Index subsystem_size) {
  const BoundParameters p = bound_parameters(kind, modes, subsystem_size);
  // epsilon at which 2 exp(-x^2 / scale) = 1
  const double x_star = std::sqrt(p.scale * kLn2);
  double eps_star = x_star;
  if (kind == BoundKind::kEntropyTypicality) eps_star = (p.center + x_star) * (p.center + x_star);
  constexpr std::array<double, 8> multiples{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0};
  std::vector<double> grid;
  for (double k : multiples) grid.push_back(k * eps_star);
  return grid;
}

LogLogFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<double>& sigma_y) {
  detail::require(x.size() == y.size(), "fit: x and y differ in length");
  detail::require(x.size() >= 3, "log-log fit needs at least 3 points");
  detail::require(sigma_y.empty() || sigma_y.size() == y.size(), "fit: sigma length mismatch");
  const std::size_t n = x.size();
  std::vector<double> lx(n);
  std::vector<double> ly(n);
  std::vector<double> w(n, 1.0);
  bool weighted = !sigma_y.empty();
  for (std::size_t i = 0; i < n; ++i) {
    detail::require(x[i] > 0.0 && y[i] > 0.0, "log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    if (weighted) {
      const double rel = sigma_y[i] / y[i];
      if (!(rel > 0.0)) {
        weighted = false;
      } else {
        w[i] = 1.0 / (rel * rel);
      }
    }
  }
  if (!weighted) std::fill(w.begin(), w.end(), 1.0);

  double sw = 0.0;
  double swx = 0.0;
  double swy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    swx += w[i] * lx[i];
    swy += w[i] * ly[i];
  }
  const double mx = swx / sw;
  const double my = swy / sw;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
    sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
  }
  detail::require(sxx > 0.0, "log-log fit needs at least two distinct x values");

  LogLogFit fit;
  fit.weighted = weighted;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (weighted) {
    fit.slope_stderr = std::sqrt(1.0 / sxx);
  } else {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

VarianceScaling variance_scaling(const std::vector<Index>& modes, Index subsystem_size,
                                 std::size_t samples, std::uint64_t seed) {
  detail::require(modes.size() >= 3, "variance scaling needs at least 3 system sizes");
  VarianceScaling out;
  out.subsystem_size = subsystem_size;
  out.samples = samples;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> sig;
  for (Index n : modes) {
    detail::require(n >= 2 * subsystem_size, "variance scaling needs N >= 2 N_A");
    EnsembleConfig cfg = EnsembleConfig::half_filling(n, samples, seed);
    cfg.seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(n)));
    std::vector<double> values(samples);
    parallel_for(samples, [&](std::size_t s) {
      values[s] = entropy(sample_reduced_covariance(cfg, subsystem_size, s));
    });
    const SampleSummary summary = summarize(values);
    out.points.push_back({n, summary.variance, summary.stderr_variance});
    xs.push_back(static_cast<double>(n));
    ys.push_back(summary.variance);
    sig.push_back(summary.stderr_variance);
  }
  out.fit = fit_loglog_slope(xs, ys, sig);
  return out;
}

}  // namespace ffpage
