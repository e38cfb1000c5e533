#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ffpage/app/config.hpp"
#include "ffpage/app/table.hpp"
#include "ffpage/page_curve.hpp"

namespace ffpage::app {

[[nodiscard]] std::string_view version();

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "FFPAGE_OUTPUT_DIR";

struct RunOutput {
  std::vector<Table> tables;             ///< written as <table name>.csv
  std::vector<PageCurve> plot_curves;    ///< rendered when the config asks for a plot
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  bool ok = true;                        ///< false: a checked invariant failed
  std::string failure;
};

/// Runs the experiment and builds its tables; touches no files. Tables carry
/// only deterministic content (no timestamps), so equal config, seed and
/// version give byte-identical tables at any thread count.
RunOutput execute(const ExperimentConfig& cfg);

/// Table for a Page curve: N_A, f, S, stderr, S/N, stderr/N.
Table curve_table(const PageCurve& curve, const std::string& name);
PageCurve curve_from_table(const Table& table);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::filesystem::path> out;
};

struct RunReport {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  RunOutput output;
};

/// --out wins; otherwise <base>/<name> with base from the config's `output`,
/// then $FFPAGE_OUTPUT_DIR, then "results".
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& options);

/// Applies overrides, executes, writes tables, optional SVG and run.json.
RunReport run(ExperimentConfig cfg, const RunOptions& options);

struct ComparePoint {
  long long subsystem_size = 0;
  double density_a = 0.0;
  double density_b = 0.0;
  double abs_difference = 0.0;
};

struct CompareReport {
  std::vector<ComparePoint> points;
  double max_difference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Pointwise |S_a/N - S_b/N|. Both tables need the same modes and N_A grid.
CompareReport compare_tables(const Table& a, const Table& b, double tolerance);

}  // namespace ffpage::app
