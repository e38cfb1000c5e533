#include "ffpage/app/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "ffpage/app/svg.hpp"
#include "ffpage/exact_oracle.hpp"
#include "ffpage/page_curves.hpp"
#include "ffpage/parallel.hpp"

namespace ffpage::app {
namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ordered_json curve_gap_summary(const PageCurve& measured, const PageCurve& reference) {
  ordered_json gaps = ordered_json::array();
  for (std::size_t i = 0; i < measured.points.size(); ++i) {
    gaps.push_back({{"subsystem_size", measured.points[i].subsystem_size},
                    {"density", measured.density(i)},
                    {"reference", reference.density(i)},
                    {"gap", measured.density(i) - reference.density(i)}});
  }
  return gaps;
}

RunOutput run_rfg_curve(const ExperimentConfig& cfg) {
  EnsembleConfig ens{cfg.modes, cfg.particles < 0 ? cfg.modes / 2 : cfg.particles, cfg.samples, cfg.seed};
  const RfgCurve result = rfg_page_curve(ens, cfg.sizes);
  RunOutput out;
  Table t = curve_table(result.curve, "rfg");
  out.tables.push_back(t);
  out.plot_curves.push_back(result.curve);
  Table var("rfg-variance", {"subsystem_size", "samples", "variance"}, {"modes", "count", "bits^2"});
  for (const auto& st : result.stats) {
    var.add_row({static_cast<long long>(st.subsystem_size), static_cast<long long>(st.samples),
                 st.variance_entropy});
  }
  out.tables.push_back(var);
  if (2 * ens.particles == ens.modes) {
    const PageCurve series = closed_form_curve(CurveSource::kSeriesRfg, cfg.modes, cfg.sizes);
    out.tables.push_back(curve_table(series, "series-rfg"));
    out.plot_curves.push_back(series);
    out.summary["gap_to_series_rfg"] = curve_gap_summary(result.curve, series);
  }
  return out;
}

RunOutput run_dyn_curve(const ExperimentConfig& cfg, TimeGrid grid) {
  const DynamicalResult dyn = dynamical_analysis(cfg.hamiltonian, grid, cfg.sizes);
  const OccupationProfile profile = conserved_occupations(cfg.hamiltonian);
  RunOutput out;
  out.tables.push_back(curve_table(dyn.curve, "dynamical"));
  out.plot_curves.push_back(dyn.curve);
  for (CurveSource src : {CurveSource::kSeriesRfg, CurveSource::kSeriesDyn,
                          CurveSource::kSeriesAtypical, CurveSource::kQuasiparticle,
                          CurveSource::kInteractingReference}) {
    const bool needs_profile =
        src == CurveSource::kSeriesAtypical || src == CurveSource::kQuasiparticle;
    PageCurve c = closed_form_curve(src, cfg.modes, cfg.sizes, needs_profile ? &profile : nullptr);
    if (needs_profile) c.model = cfg.hamiltonian.name;
    out.tables.push_back(curve_table(c, std::string(to_string(src))));
    out.plot_curves.push_back(c);
  }
  out.summary["theorem2_satisfied"] = profile.theorem2_satisfied;
  out.summary["max_occupation_deviation"] = profile.max_deviation_from_half();
  out.summary["gap_to_series_rfg"] =
      curve_gap_summary(dyn.curve, closed_form_curve(CurveSource::kSeriesRfg, cfg.modes, cfg.sizes));
  return out;
}

RunOutput run_moments(const ExperimentConfig& cfg, TimeGrid grid) {
  const DynamicalResult dyn = dynamical_analysis(cfg.hamiltonian, grid, cfg.sizes);
  Table t("moments",
          {"subsystem_size", "fraction", "tr_x2", "tr_x2_stderr", "tr_x2_predicted", "tr_x2_rel_error",
           "tr_x3", "tr_x3_stderr", "tr_x3_limit", "tr_x4", "tr_x4_stderr", "tr_x4_predicted",
           "tr_x4_rel_error", "tr_x6", "tr_x6_stderr", "tr_x6_predicted", "tr_x6_rel_error"},
          {"modes", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1"});
  t.set_meta("model", cfg.hamiltonian.name);
  t.set_meta("modes", std::to_string(cfg.modes));
  t.set_meta("time_scheme", std::string(to_string(grid.scheme)));
  ordered_json rows = ordered_json::array();
  for (const auto& m : dyn.moments) {
    auto predicted = [&](int n) {
      if (n == 3 && 2 * m.subsystem_size > cfg.modes && m.subsystem_size != cfg.modes) return kNaN;
      return moment_prediction(n, cfg.modes, m.subsystem_size);
    };
    const double p2 = predicted(1);
    const double p4 = predicted(2);
    const double p6 = predicted(3);
    const double r2 = std::abs(m.tr_x2.mean - p2) / p2;
    const double r4 = std::abs(m.tr_x4.mean - p4) / p4;
    const double r6 = std::abs(m.tr_x6.mean - p6) / p6;
    const double x3_limit = 5.0 * static_cast<double>(m.subsystem_size) / static_cast<double>(cfg.modes);
    t.add_row({static_cast<long long>(m.subsystem_size), m.fraction(), m.tr_x2.mean,
               m.tr_x2.stderr_mean, p2, r2, m.tr_x3.mean, m.tr_x3.stderr_mean, x3_limit, m.tr_x4.mean,
               m.tr_x4.stderr_mean, p4, r4, m.tr_x6.mean, m.tr_x6.stderr_mean, p6, r6});
    rows.push_back({{"subsystem_size", m.subsystem_size}, {"rel_error_x2", r2},
                    {"rel_error_x4", r4}, {"rel_error_x6", std::isnan(r6) ? ordered_json() : ordered_json(r6)},
                    {"tr_x3", m.tr_x3.mean}, {"tr_x3_limit", x3_limit}});
  }
  RunOutput out;
  out.tables.push_back(t);
  out.summary["moments"] = rows;
  return out;
}

RunOutput run_quasiparticle(const ExperimentConfig& cfg, TimeGrid grid) {
  const PageCurve dyn = dynamical_page_curve(cfg.hamiltonian, grid, cfg.sizes);
  const OccupationProfile profile = conserved_occupations(cfg.hamiltonian);
  PageCurve qp = closed_form_curve(CurveSource::kQuasiparticle, cfg.modes, cfg.sizes, &profile);
  qp.model = cfg.hamiltonian.name;
  Table t("qp-excess", {"subsystem_size", "dynamical", "std_error", "quasiparticle", "excess", "excess_over_stderr"},
          {"modes", "bits", "bits", "bits", "bits", "1"});
  t.set_meta("model", cfg.hamiltonian.name);
  t.set_meta("modes", std::to_string(cfg.modes));
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dyn.points.size(); ++i) {
    const auto& p = dyn.points[i];
    const double excess = p.entropy - qp.points[i].entropy;
    const double z = p.std_error > 0.0 ? excess / p.std_error : (excess >= 0 ? 1e300 : -1e300);
    t.add_row({static_cast<long long>(p.subsystem_size), p.entropy, p.std_error, qp.points[i].entropy,
               excess, z});
    min_margin = std::min(min_margin, z);
  }
  RunOutput out;
  out.tables.push_back(curve_table(dyn, "dynamical"));
  out.tables.push_back(curve_table(qp, "quasiparticle"));
  out.tables.push_back(t);
  out.plot_curves = {dyn, qp};
  out.summary["min_excess_over_stderr"] = min_margin;
  return out;
}

RunOutput run_classify(const ExperimentConfig& cfg) {
  const OccupationProfile profile = conserved_occupations(cfg.hamiltonian);
  Table t("occupations", {"index", "momentum", "energy", "occupation", "eta", "degenerate"},
          {"1", "rad", "hopping", "1", "1", "1"});
  t.set_meta("model", cfg.hamiltonian.name);
  t.set_meta("modes", std::to_string(cfg.modes));
  t.set_meta("theorem2_satisfied", profile.theorem2_satisfied ? "true" : "false");
  t.set_meta("max_deviation_from_half", format_double(profile.max_deviation_from_half()));
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    const auto& e = profile.entries[i];
    t.add_row({static_cast<long long>(i), e.momentum, e.energy, e.occupation, e.eta, e.degenerate});
  }
  RunOutput out;
  out.tables.push_back(t);
  out.summary["theorem2_satisfied"] = profile.theorem2_satisfied;
  out.summary["max_deviation_from_half"] = profile.max_deviation_from_half();
  return out;
}

RunOutput run_typicality(const ExperimentConfig& cfg) {
  Table t("concentration",
          {"modes", "subsystem_size", "bound", "epsilon", "threshold", "empirical_tail",
           "analytic_bound", "binomial_stderr", "in_domain", "violated"},
          {"modes", "modes", "name", "1", "1", "1", "1", "1", "flag", "flag"});
  t.set_meta("samples", std::to_string(cfg.samples));
  std::size_t violations = 0;
  std::size_t binding = 0;
  ordered_json cases = ordered_json::array();
  for (std::size_t ci = 0; ci < cfg.cases.size(); ++ci) {
    const auto& c = cfg.cases[ci];
    EnsembleConfig ens = EnsembleConfig::half_filling(c.modes, cfg.samples, mix64(cfg.seed + ci));
    std::vector<BoundRequest> requests;
    for (BoundKind kind : cfg.bounds) {
      requests.push_back({kind, cfg.epsilon.empty()
                                    ? default_epsilon_grid(kind, c.modes, c.subsystem_size)
                                    : cfg.epsilon});
    }
    for (const ConcentrationReport& r : concentration_experiments(ens, c.subsystem_size, requests)) {
      const BoundKind kind = r.kind;
      for (std::size_t i = 0; i < r.epsilon.size(); ++i) {
        t.add_row({static_cast<long long>(c.modes), static_cast<long long>(c.subsystem_size),
                   std::string(to_string(kind)), r.epsilon[i], r.threshold[i], r.empirical_tail[i],
                   r.analytic_bound[i], r.binomial_stderr[i], static_cast<bool>(r.in_domain[i]),
                   static_cast<bool>(r.violated[i])});
      }
      violations += r.violation_count();
      binding += r.binding_count();
      cases.push_back({{"modes", c.modes}, {"subsystem_size", c.subsystem_size},
                       {"bound", to_string(kind)}, {"violations", r.violation_count()},
                       {"binding_points", r.binding_count()}});
    }
  }
  RunOutput out;
  out.tables.push_back(t);
  out.summary["violations"] = violations;
  out.summary["binding_points"] = binding;
  out.summary["cases"] = cases;
  return out;
}

RunOutput run_variance(const ExperimentConfig& cfg) {
  const VarianceScaling v = variance_scaling(cfg.modes_list, cfg.subsystem_size, cfg.samples, cfg.seed);
  Table pts("variance", {"modes", "variance", "stderr_variance"}, {"modes", "bits^2", "bits^2"});
  pts.set_meta("subsystem_size", std::to_string(cfg.subsystem_size));
  pts.set_meta("samples", std::to_string(cfg.samples));
  for (const auto& p : v.points) pts.add_row({static_cast<long long>(p.modes), p.variance, p.stderr_variance});
  Table fit("variance-fit", {"slope", "slope_stderr", "intercept", "weighted"}, {"1", "1", "1", "flag"});
  fit.add_row({v.fit.slope, v.fit.slope_stderr, v.fit.intercept, v.fit.weighted});
  RunOutput out;
  out.tables = {pts, fit};
  out.summary["slope"] = v.fit.slope;
  out.summary["slope_stderr"] = v.fit.slope_stderr;
  return out;
}

RunOutput run_oracle_check(const ExperimentConfig& cfg) {
  Table t("oracle", {"model", "modes", "time", "begin", "subsystem_size", "fock_entropy",
                     "gaussian_entropy", "abs_difference"},
          {"name", "modes", "inverse hopping", "site", "modes", "bits", "bits", "bits"});
  t.set_meta("tolerance", format_double(cfg.tolerance));
  double worst = 0.0;
  std::size_t checks = 0;
  const RandomStream root = RandomStream(cfg.seed).split(stream_tag::kTimes);
  for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
    for (Index n : cfg.modes_list) {
      const HamiltonianSpec spec = parse_hamiltonian(cfg.models[mi], n);
      const HermitianMatrix h = build_single_particle(spec);
      const oracle::FockPropagator fock(h);
      const CovariancePropagator gauss(h, density_wave_covariance(n));
      const oracle::FockState psi0 = oracle::build_density_wave(static_cast<int>(n));
      RandomStream rng = root.split(mi * 64 + static_cast<std::uint64_t>(n));
      std::uniform_real_distribution<double> uniform(0.0, cfg.t_max);
      std::vector<double> times(cfg.times);
      for (auto& time : times) time = uniform(rng);

      struct Row {
        Index begin, size;
        double fock, gauss;
      };
      std::vector<std::vector<Row>> rows(times.size());
      parallel_for(times.size(), [&](std::size_t ti) {
        const oracle::FockState psi = fock.evolve(psi0, times[ti]);
        const CovarianceMatrix c = gauss.at(times[ti]);
        for (Index b = 0; b < n; ++b) {
          for (Index e = b + 1; e <= n; ++e) {
            const auto sel = SubsystemSelection::range(b, e);
            rows[ti].push_back({b, e - b, oracle::fock_entropy(psi, sel), entropy(reduce(c, sel))});
          }
        }
      });
      for (std::size_t ti = 0; ti < times.size(); ++ti) {
        for (const auto& r : rows[ti]) {
          const double diff = std::abs(r.fock - r.gauss);
          worst = std::max(worst, diff);
          ++checks;
          t.add_row({spec.name, static_cast<long long>(n), times[ti], static_cast<long long>(r.begin),
                     static_cast<long long>(r.size), r.fock, r.gauss, diff});
        }
      }
    }
  }
  RunOutput out;
  out.tables.push_back(t);
  out.summary["checks"] = checks;
  out.summary["max_abs_difference"] = worst;
  out.summary["tolerance"] = cfg.tolerance;
  out.ok = worst < cfg.tolerance;
  if (!out.ok) {
    out.failure = "Gaussian and Fock-space entropies differ by " + format_double(worst) +
                  " > tolerance " + format_double(cfg.tolerance);
  }
  return out;
}

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

}  // namespace

std::string_view version() { return FFPAGE_VERSION; }

Table curve_table(const PageCurve& curve, const std::string& name) {
  curve.validate();
  Table t(name, {"subsystem_size", "fraction", "entropy", "std_error", "density", "density_std_error"},
          {"modes", "1", "bits", "bits", "bits/mode", "bits/mode"});
  t.set_meta("source", std::string(to_string(curve.source)));
  t.set_meta("modes", std::to_string(curve.modes));
  t.set_meta("model", curve.model);
  if (!curve.note.empty()) t.set_meta("note", curve.note);
  const double n = static_cast<double>(curve.modes);
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    t.add_row({static_cast<long long>(p.subsystem_size), curve.fraction(i), p.entropy, p.std_error,
               curve.density(i), p.std_error / n});
  }
  return t;
}

PageCurve curve_from_table(const Table& table) {
  PageCurve c;
  const auto modes = table.meta("modes");
  const auto source = table.meta("source");
  if (!modes || !source) throw ValidationError("table '" + table.name() + "' is not a Page curve");
  c.modes = std::stoll(*modes);
  c.source = parse_curve_source(*source);
  c.model = table.meta("model").value_or("");
  c.note = table.meta("note").value_or("");
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    c.points.push_back({static_cast<Index>(table.integer(r, "subsystem_size")), table.number(r, "entropy"),
                        table.number(r, "std_error")});
  }
  c.validate();
  return c;
}

RunOutput execute(const ExperimentConfig& cfg) {
  TimeGrid grid = cfg.grid;
  grid.seed = cfg.seed;
  RunOutput out;
  switch (cfg.kind) {
    case ExperimentKind::kRfgCurve: out = run_rfg_curve(cfg); break;
    case ExperimentKind::kDynCurve: out = run_dyn_curve(cfg, grid); break;
    case ExperimentKind::kMoments: out = run_moments(cfg, grid); break;
    case ExperimentKind::kQuasiparticle: out = run_quasiparticle(cfg, grid); break;
    case ExperimentKind::kClassify: out = run_classify(cfg); break;
    case ExperimentKind::kTypicality: out = run_typicality(cfg); break;
    case ExperimentKind::kVariance: out = run_variance(cfg); break;
    case ExperimentKind::kOracleCheck: out = run_oracle_check(cfg); break;
  }
  const std::string hash = sha256_hex(cfg.raw_text);
  for (auto& t : out.tables) {
    t.prepend_meta({{"version", std::string(version())},
                    {"experiment", std::string(to_string(cfg.kind))},
                    {"name", cfg.name},
                    {"config_sha256", hash},
                    {"seed", std::to_string(cfg.seed)}});
  }
  return out;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& options) {
  if (options.out) return *options.out;
  std::filesystem::path base = "results";
  if (!cfg.output.empty()) {
    base = cfg.output;
  } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    base = env;
  }
  return base / cfg.name;
}

RunReport run(ExperimentConfig cfg, const RunOptions& options) {
  if (options.seed) cfg.seed = *options.seed;
  if (options.threads) cfg.threads = *options.threads;
  set_thread_count(cfg.threads);

  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.output = execute(cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto finished = std::chrono::system_clock::now();

  report.directory = resolve_output_dir(cfg, options);
  std::filesystem::create_directories(report.directory);
  ordered_json files = ordered_json::array();
  for (const auto& t : report.output.tables) {
    const auto path = report.directory / (t.name() + ".csv");
    write_text_file(path, t.serialize());
    report.files.push_back(path);
    files.push_back(path.filename().string());
  }
  if (cfg.plot && !report.output.plot_curves.empty()) {
    const auto path = report.directory / (cfg.name + ".svg");
    write_text_file(path, render_svg(report.output.plot_curves, cfg.name));
    report.files.push_back(path);
    files.push_back(path.filename().string());
  }

  ordered_json meta;
  meta["version"] = version();
  meta["experiment"] = to_string(cfg.kind);
  meta["name"] = cfg.name;
  meta["config_path"] = cfg.origin;
  meta["config_sha256"] = sha256_hex(cfg.raw_text);
  meta["seed"] = cfg.seed;
  meta["seed_overridden"] = options.seed.has_value();
  meta["threads"] = thread_count();
  meta["started_utc"] = utc_timestamp(started);
  meta["completed_utc"] = utc_timestamp(finished);
  meta["duration_seconds"] = seconds;
  meta["ok"] = report.output.ok;
  if (!report.output.ok) meta["failure"] = report.output.failure;
  meta["files"] = files;
  meta["summary"] = report.output.summary;
  meta["config_text"] = cfg.raw_text;
  const auto meta_path = report.directory / "run.json";
  write_text_file(meta_path, meta.dump(2) + "\n");
  report.files.push_back(meta_path);
  return report;
}

CompareReport compare_tables(const Table& a, const Table& b, double tolerance) {
  detail::require(tolerance >= 0.0, "tolerance must be non-negative");
  for (const Table* t : {&a, &b}) {
    if (!t->has_column("subsystem_size") || !t->has_column("density")) {
      throw ValidationError("table '" + t->name() + "' is not a Page curve table");
    }
  }
  if (a.meta("modes") != b.meta("modes")) {
    throw ValidationError("grid mismatch: tables have different mode counts");
  }
  if (a.row_count() != b.row_count()) {
    throw ValidationError("grid mismatch: " + std::to_string(a.row_count()) + " vs " +
                          std::to_string(b.row_count()) + " points");
  }
  CompareReport r;
  r.tolerance = tolerance;
  for (std::size_t i = 0; i < a.row_count(); ++i) {
    const long long na = a.integer(i, "subsystem_size");
    if (na != b.integer(i, "subsystem_size")) {
      throw ValidationError("grid mismatch at row " + std::to_string(i) + ": N_A = " + std::to_string(na) +
                            " vs " + std::to_string(b.integer(i, "subsystem_size")));
    }
    ComparePoint p{na, a.number(i, "density"), b.number(i, "density"), 0.0};
    p.abs_difference = std::abs(p.density_a - p.density_b);
    r.max_difference = std::max(r.max_difference, p.abs_difference);
    r.points.push_back(p);
  }
  r.pass = r.max_difference <= tolerance;
  return r;
}

}  // namespace ffpage::app
