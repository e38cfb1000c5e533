#include "ffpage/page_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "ffpage/error.hpp"
#include "ffpage/rfg_ensemble.hpp"

namespace ffpage {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Per-realization observables for one N_A.
enum Observable : std::size_t { kEntropy, kX2, kX3, kX4, kX6, kObservableCount };

double reflected_fraction(Index modes, Index subsystem_size) {
  const double f = static_cast<double>(subsystem_size) / static_cast<double>(modes);
  return std::min(f, 1.0 - f);
}

}  // namespace

DynamicalResult dynamical_analysis(const HamiltonianSpec& spec, const TimeGrid& grid,
                                   std::vector<Index> subsystem_sizes) {
  spec.validate();
  grid.validate();
  const std::vector<Index> sizes = normalize_sizes(std::move(subsystem_sizes), spec.modes);
  const CovariancePropagator propagator(build_single_particle(spec),
                                        density_wave_covariance(spec.modes));

  std::vector<double> times;
  if (grid.scheme == TimeScheme::kUniformWindow) times = sample_times(grid);
  const std::size_t count = grid.samples;
  const RandomStream phase_root = RandomStream(grid.seed).split(stream_tag::kPhases);

  // values[(p * kObservableCount + o) * count + r]
  std::vector<double> values(sizes.size() * kObservableCount * count);
  parallel_for(count, [&](std::size_t r) {
    CovarianceMatrix c = [&] {
      if (grid.scheme == TimeScheme::kUniformWindow) return propagator.at(times[r]);
      RandomStream rng = phase_root.split(r);
      return propagator.with_phases(propagator.random_phases(rng));
    }();
    for (std::size_t p = 0; p < sizes.size(); ++p) {
      const Index na = sizes[p];
      const RealVector lambda = eigvalsh(c.matrix().topLeftCorner(na, na));
      double x2 = 0.0;
      double x3 = 0.0;
      double x4 = 0.0;
      double x6 = 0.0;
      for (Index i = 0; i < lambda.size(); ++i) {
        const double x = 2.0 * lambda(i) - 1.0;
        const double sq = x * x;
        x2 += sq;
        x3 += sq * x;
        x4 += sq * sq;
        x6 += sq * sq * sq;
      }
      auto slot = [&](Observable o) -> double& {
        return values[(p * kObservableCount + o) * count + r];
      };
      slot(kEntropy) = entropy_from_spectrum(std::span<const double>(lambda.data(), lambda.size()));
      slot(kX2) = x2;
      slot(kX3) = x3;
      slot(kX4) = x4;
      slot(kX6) = x6;
    }
  });

  DynamicalResult out;
  out.realizations = count;
  out.curve.modes = spec.modes;
  out.curve.source = CurveSource::kDynamical;
  out.curve.model = spec.name;
  out.curve.note = std::string(to_string(grid.scheme)) + " M=" + std::to_string(count);
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    auto summary = [&](Observable o) {
      return summarize(std::span<const double>(values.data() + (p * kObservableCount + o) * count, count));
    };
    const SampleSummary s = summary(kEntropy);
    out.curve.points.push_back({sizes[p], s.mean, s.stderr_mean});
    MomentSet m;
    m.modes = spec.modes;
    m.subsystem_size = sizes[p];
    m.tr_x2 = summary(kX2);
    m.tr_x3 = summary(kX3);
    m.tr_x4 = summary(kX4);
    m.tr_x6 = summary(kX6);
    out.moments.push_back(m);
  }
  out.curve.validate();
  return out;
}

PageCurve dynamical_page_curve(const HamiltonianSpec& spec, const TimeGrid& grid,
                               std::vector<Index> subsystem_sizes) {
  return dynamical_analysis(spec, grid, std::move(subsystem_sizes)).curve;
}

double series_dyn(double f) {
  detail::require(f >= 0.0 && f <= 0.5, "series_dyn needs 0 <= f <= 1/2");
  const double f2 = f * f;
  return f - (f2 / 2.0 + f2 * f / 6.0 + f2 * f2 / 10.0) / kLn2;
}

double moment_prediction(int n, Index modes, Index subsystem_size) {
  detail::require(n >= 1 && n <= 3, "moment_prediction covers n = 1, 2, 3");
  detail::require(modes >= 1, "moment_prediction needs N >= 1");
  detail::require(subsystem_size >= 1 && subsystem_size <= modes, "N_A must lie in [1, N]");
  const double big = static_cast<double>(modes);
  if (subsystem_size == modes) return big;
  const double na = static_cast<double>(subsystem_size);
  const double f = na / big;
  switch (n) {
    case 1:
      return na * f;
    case 2:
      return 2.0 * na * f * f - na * f * f * f;
    default:
      if (2 * subsystem_size > modes) {
        throw ValidationError("Tr X^6 closed form exists only for N_A <= N/2 or N_A = N");
      }
      return 5.5 * na * std::pow(f, 3) - 8.0 * na * std::pow(f, 4) + 4.0 * na * std::pow(f, 5);
  }
}

double moment_series_entropy(Index modes, Index subsystem_size, int order) {
  detail::require(order >= 1 && order <= 3, "series order must be 1, 2 or 3");
  double s = static_cast<double>(subsystem_size);
  for (int n = 1; n <= order; ++n) {
    s -= moment_prediction(n, modes, subsystem_size) / (2.0 * n * (2.0 * n - 1.0) * kLn2);
  }
  return s;
}

double series_atypical(const OccupationProfile& profile, Index modes, Index subsystem_size) {
  profile.validate();
  detail::require(profile.modes == modes, "occupation profile has the wrong mode count");
  detail::require(subsystem_size >= 1 && 2 * subsystem_size <= modes,
                  "series_atypical needs 1 <= N_A <= N/2");

  double n2 = 0.0, n3 = 0.0, n4 = 0.0;
  double e2 = 0.0, e4 = 0.0, ne2 = 0.0, n2e2 = 0.0;
  for (const auto& mode : profile.entries) {
    const double n = mode.occupation;
    const double e = mode.eta * mode.eta;
    n2 += n * n;
    n3 += n * n * n;
    n4 += n * n * n * n;
    e2 += e;
    e4 += e * e;
    ne2 += n * e;
    n2e2 += n * n * e;
  }
  const double a = static_cast<double>(subsystem_size) / static_cast<double>(modes);
  const double a2 = a * a;
  const double tr_c2 = a * n2 + a2 * e2;
  const double tr_c3 = a * n3 + 3.0 * a2 * ne2;
  const double tr_c4 = a * n4 + 4.0 * a2 * n2e2 + 2.0 * a2 * e4 + 2.0 * a2 * a * e4 - a2 * a2 * e4;

  // sum_i H(lambda_i) ln 2 to fourth order in x = 2 lambda - 1, with Tr C_A = N_A / 2.
  const double na = static_cast<double>(subsystem_size);
  const double nats =
      na * (kLn2 + 0.75) - (4.0 * tr_c2 - (8.0 / 3.0) * tr_c3 + (4.0 / 3.0) * tr_c4);
  return nats / kLn2;
}

double quasiparticle_entropy(const OccupationProfile& profile, Index modes, Index subsystem_size) {
  profile.validate();
  detail::require(profile.modes == modes, "occupation profile has the wrong mode count");
  detail::require(subsystem_size >= 0 && subsystem_size <= modes, "N_A must lie in [0, N]");
  double pairs = 0.0;
  for (const auto& mode : profile.entries) pairs += binary_entropy(mode.occupation);
  const double a = static_cast<double>(subsystem_size) / static_cast<double>(modes);
  return (a - a * a) * pairs;
}

double interacting_reference(double f) {
  detail::require(f >= 0.0 && f <= 1.0, "interacting_reference needs 0 <= f <= 1");
  return std::min(f, 1.0 - f);
}

PageCurve closed_form_curve(CurveSource source, Index modes, std::vector<Index> subsystem_sizes,
                            const OccupationProfile* profile) {
  const std::vector<Index> sizes = normalize_sizes(std::move(subsystem_sizes), modes);
  const double big = static_cast<double>(modes);
  PageCurve curve;
  curve.modes = modes;
  curve.source = source;
  curve.model = profile != nullptr ? "profile" : "closed-form";
  for (Index na : sizes) {
    const double f = static_cast<double>(na) / big;
    double s = 0.0;
    switch (source) {
      case CurveSource::kSeriesRfg:
        s = big * series_rfg(reflected_fraction(modes, na));
        break;
      case CurveSource::kSeriesDyn:
        s = big * series_dyn(reflected_fraction(modes, na));
        break;
      case CurveSource::kInteractingReference:
        s = big * interacting_reference(f);
        break;
      case CurveSource::kSeriesAtypical:
        detail::require(profile != nullptr, "series-atypical curve needs an occupation profile");
        s = (na == modes) ? 0.0 : series_atypical(*profile, modes, std::min(na, modes - na));
        curve.note = "truncated at Tr X^4";
        break;
      case CurveSource::kQuasiparticle:
        detail::require(profile != nullptr, "quasiparticle curve needs an occupation profile");
        s = quasiparticle_entropy(*profile, modes, na);
        break;
      default:
        throw ValidationError("no closed form for curve source '" + std::string(to_string(source)) + "'");
    }
    // Series are truncated expansions; keep them inside [0, N_A].
    curve.points.push_back({na, std::clamp(s, 0.0, static_cast<double>(na)), 0.0});
  }
  curve.validate();
  return curve;
}

}  // namespace ffpage
