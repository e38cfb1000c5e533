#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffpage/error.hpp"
#include "ffpage/quench.hpp"
#include "ffpage/rfg_ensemble.hpp"

namespace ffpage::app {

enum class ExperimentKind {
  kRfgCurve,
  kDynCurve,
  kTypicality,
  kVariance,
  kMoments,
  kClassify,
  kQuasiparticle,
  kOracleCheck,
};

[[nodiscard]] std::string_view to_string(ExperimentKind kind);
[[nodiscard]] std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
[[nodiscard]] const std::vector<ExperimentKind>& all_experiment_kinds();
[[nodiscard]] std::string_view describe(ExperimentKind kind);

/// Configuration problem with the 1-based line it refers to (0 if unknown).
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& origin, int line, const std::string& what);
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

struct TypicalityCase {
  Index modes = 0;
  Index subsystem_size = 0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kRfgCurve;
  std::string name;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;  ///< empty: not set
  bool plot = false;

  /// Exact bytes the config was parsed from.
  std::string raw_text;
  std::string origin;

  // rfg-curve, dyn-curve, moments, classify, qp
  Index modes = 0;
  Index particles = -1;  ///< -1: half filling
  std::size_t samples = 0;
  std::vector<Index> sizes;
  HamiltonianSpec hamiltonian;
  TimeGrid grid;

  // typicality
  std::vector<TypicalityCase> cases;
  std::vector<BoundKind> bounds;
  std::vector<double> epsilon;  ///< empty: default grid per case and bound

  // variance, oracle-check
  std::vector<Index> modes_list;
  Index subsystem_size = 0;

  // oracle-check
  std::vector<std::string> models;  ///< YAML text of each hamiltonian node
  std::size_t times = 0;
  double t_max = 0.0;
  double tolerance = 1e-8;
};

/// Parses and validates a YAML experiment description. Every error carries the
/// offending line.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Hamiltonian presets: minimal, odd-range, even-range.
HamiltonianSpec preset_hamiltonian(std::string_view name, Index modes, double coupling,
                                   Index range);

/// Hamiltonian node (as stored in ExperimentConfig::models) instantiated at `modes`.
HamiltonianSpec parse_hamiltonian(const std::string& text, Index modes);

}  // namespace ffpage::app
