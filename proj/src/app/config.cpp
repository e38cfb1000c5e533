#include "ffpage/app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace ffpage::app {
namespace {

constexpr std::array<std::tuple<ExperimentKind, std::string_view, std::string_view>, 8> kKinds{{
    {ExperimentKind::kRfgCurve, "rfg-curve", "Monte-Carlo Page curve of the random Gaussian ensemble"},
    {ExperimentKind::kDynCurve, "dyn-curve", "long-time averaged entropy after a density-wave quench"},
    {ExperimentKind::kTypicality, "typicality", "empirical tails against the concentration bounds"},
    {ExperimentKind::kVariance, "variance", "entropy variance against system size, log-log slope"},
    {ExperimentKind::kMoments, "moments", "time-averaged Tr X^n against the closed forms"},
    {ExperimentKind::kClassify, "classify", "conserved mode occupations and the n_k = 1/2 verdict"},
    {ExperimentKind::kQuasiparticle, "qp", "dynamical curve against the quasi-particle count"},
    {ExperimentKind::kOracleCheck, "oracle-check", "Gaussian entropies against the Fock-space oracle"},
}};

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    throw ConfigError(origin_, at.IsDefined() ? at.Mark().line + 1 : 0, what);
  }

  void only_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed) const {
    if (!map.IsMap()) fail(map, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(kv.first, "unknown key '" + key + "'");
      }
    }
  }

  YAML::Node required(const YAML::Node& map, const std::string& key) const {
    const YAML::Node node = map[key];
    if (!node.IsDefined() || node.IsNull()) fail(map, "missing required key '" + key + "'");
    return node;
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + ": expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, what + ": cannot read '" + node.Scalar() + "'");
    }
  }

  template <typename T>
  T get(const YAML::Node& map, const std::string& key) const {
    return scalar<T>(required(map, key), key);
  }

  template <typename T>
  T get_or(const YAML::Node& map, const std::string& key, T fallback) const {
    const YAML::Node node = map[key];
    if (!node.IsDefined() || node.IsNull()) return fallback;
    return scalar<T>(node, key);
  }

  Index positive(const YAML::Node& map, const std::string& key) const {
    const auto v = get<long long>(map, key);
    if (v < 1) fail(map[key], key + " must be >= 1");
    return static_cast<Index>(v);
  }

  std::vector<Index> index_list(const YAML::Node& node, const std::string& what) const {
    std::vector<Index> out;
    if (node.IsSequence()) {
      for (const auto& item : node) {
        const auto v = scalar<long long>(item, what);
        if (v < 1) fail(item, what + " entries must be >= 1");
        out.push_back(static_cast<Index>(v));
      }
    } else if (node.IsMap()) {
      only_keys(node, {"from", "to", "step"});
      const auto from = get<long long>(node, "from");
      const auto to = get<long long>(node, "to");
      const auto step = get_or<long long>(node, "step", 1);
      if (from < 1 || to < from || step < 1) fail(node, what + ": need 1 <= from <= to, step >= 1");
      for (long long v = from; v <= to; v += step) out.push_back(static_cast<Index>(v));
    } else {
      fail(node, what + ": expected a list or {from, to, step}");
    }
    if (out.empty()) fail(node, what + " is empty");
    return out;
  }

  std::vector<double> real_list(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, what + ": expected a list");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(scalar<double>(item, what));
    if (out.empty()) fail(node, what + " is empty");
    return out;
  }

  Complex amplitude(const YAML::Node& node, const std::string& what) const {
    if (node.IsSequence()) {
      if (node.size() != 2) fail(node, what + ": complex amplitude is [re, im]");
      return {scalar<double>(node[0], what), scalar<double>(node[1], what)};
    }
    return {scalar<double>(node, what), 0.0};
  }

  HamiltonianSpec hamiltonian(const YAML::Node& node, Index modes) const {
    if (!node.IsMap()) fail(node, "hamiltonian: expected a mapping");
    only_keys(node, {"preset", "coupling", "range", "name", "hoppings"});
    HamiltonianSpec spec;
    try {
      if (node["preset"].IsDefined()) {
        if (node["hoppings"].IsDefined()) fail(node, "hamiltonian: give either preset or hoppings");
        const auto preset = get<std::string>(node, "preset");
        const double coupling = get_or<double>(node, "coupling", 0.0);
        const auto range = static_cast<Index>(get_or<long long>(node, "range", 0));
        spec = preset_hamiltonian(preset, modes, coupling, range);
      } else {
        const YAML::Node list = required(node, "hoppings");
        if (!list.IsSequence()) fail(list, "hoppings: expected a list");
        spec.modes = modes;
        for (const auto& term : list) {
          only_keys(term, {"range", "even", "odd"});
          Hopping h;
          h.range = static_cast<Index>(get<long long>(term, "range"));
          h.even_amplitude = amplitude(required(term, "even"), "even");
          h.odd_amplitude = amplitude(required(term, "odd"), "odd");
          spec.hoppings.push_back(h);
        }
      }
      spec.name = get_or<std::string>(node, "name", spec.name);
      spec.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(node, std::string("hamiltonian: ") + e.what());
    }
    return spec;
  }

  TimeGrid time_grid(const YAML::Node& node, std::uint64_t seed) const {
    TimeGrid grid;
    grid.seed = seed;
    if (!node.IsDefined()) return grid;
    only_keys(node, {"scheme", "t_min", "t_max", "samples"});
    try {
      grid.scheme = parse_time_scheme(get_or<std::string>(node, "scheme", "uniform-window"));
    } catch (const ValidationError& e) {
      fail(node["scheme"], e.what());
    }
    grid.t_min = get_or<double>(node, "t_min", grid.t_min);
    grid.t_max = get_or<double>(node, "t_max", grid.t_max);
    grid.samples = static_cast<std::size_t>(get_or<long long>(node, "samples",
                                                              static_cast<long long>(grid.samples)));
    try {
      grid.validate();
    } catch (const ValidationError& e) {
      fail(node, std::string("time_grid: ") + e.what());
    }
    return grid;
  }

 private:
  std::string origin_;
};

void check_sizes(const Reader& r, const YAML::Node& at, const std::vector<Index>& sizes, Index modes) {
  for (Index s : sizes) {
    if (s > modes) r.fail(at, "subsystem size " + std::to_string(s) + " exceeds modes = " + std::to_string(modes));
  }
}

}  // namespace

ConfigError::ConfigError(const std::string& origin, int line, const std::string& what)
    : ValidationError(origin + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name, blurb] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::string_view describe(ExperimentKind kind) {
  for (const auto& [k, name, blurb] : kKinds) {
    if (k == kind) return blurb;
  }
  return "";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (const auto& [k, n, blurb] : kKinds) {
    if (n == name) return k;
  }
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiment_kinds() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> out;
    for (const auto& entry : kKinds) out.push_back(std::get<0>(entry));
    return out;
  }();
  return kinds;
}

HamiltonianSpec preset_hamiltonian(std::string_view name, Index modes, double coupling,
                                   Index range) {
  if (name == "minimal") return HamiltonianSpec::minimal(modes);
  if (name == "odd-range") return HamiltonianSpec::odd_range(modes, coupling, range == 0 ? 3 : range);
  if (name == "even-range") return HamiltonianSpec::even_range(modes, coupling, range == 0 ? 2 : range);
  throw ValidationError("unknown hamiltonian preset '" + std::string(name) + "'");
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  const Reader r(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin, e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw ConfigError(origin, 1, "config must be a mapping");

  ExperimentConfig cfg;
  cfg.raw_text = text;
  cfg.origin = origin;

  const YAML::Node kind_node = r.required(root, "experiment");
  const auto kind_name = r.scalar<std::string>(kind_node, "experiment");
  const auto kind = parse_experiment_kind(kind_name);
  if (!kind) r.fail(kind_node, "unknown experiment '" + kind_name + "'");
  cfg.kind = *kind;

  const YAML::Node seed_node = root["seed"];
  if (!seed_node.IsDefined() || seed_node.IsNull()) {
    r.fail(root, "missing required key 'seed' (runs must be reproducible)");
  }
  cfg.seed = r.scalar<std::uint64_t>(seed_node, "seed");
  cfg.name = r.get_or<std::string>(root, "name", kind_name);
  if (cfg.name.empty() || cfg.name.find_first_of("/\\ ,\"") != std::string::npos) {
    r.fail(root["name"], "name must be non-empty without spaces, commas, quotes or slashes");
  }
  cfg.threads = r.get_or<int>(root, "threads", 0);
  if (cfg.threads < 0) r.fail(root["threads"], "threads must be >= 0");
  cfg.output = r.get_or<std::string>(root, "output", "");
  cfg.plot = r.get_or<bool>(root, "plot", false);

  switch (cfg.kind) {
    case ExperimentKind::kRfgCurve: {
      r.only_keys(root, {"experiment", "name", "seed", "threads", "output", "plot", "modes",
                         "particles", "samples", "sizes"});
      cfg.modes = r.positive(root, "modes");
      cfg.particles = static_cast<Index>(r.get_or<long long>(root, "particles", cfg.modes / 2));
      if (cfg.particles < 0 || cfg.particles > cfg.modes) r.fail(root["particles"], "particles must lie in [0, modes]");
      cfg.samples = static_cast<std::size_t>(r.positive(root, "samples"));
      cfg.sizes = r.index_list(r.required(root, "sizes"), "sizes");
      check_sizes(r, root["sizes"], cfg.sizes, cfg.modes);
      break;
    }
    case ExperimentKind::kDynCurve:
    case ExperimentKind::kMoments:
    case ExperimentKind::kQuasiparticle: {
      r.only_keys(root, {"experiment", "name", "seed", "threads", "output", "plot", "modes",
                         "hamiltonian", "time_grid", "sizes"});
      cfg.modes = r.positive(root, "modes");
      cfg.hamiltonian = r.hamiltonian(r.required(root, "hamiltonian"), cfg.modes);
      cfg.grid = r.time_grid(root["time_grid"], cfg.seed);
      cfg.sizes = r.index_list(r.required(root, "sizes"), "sizes");
      check_sizes(r, root["sizes"], cfg.sizes, cfg.modes);
      break;
    }
    case ExperimentKind::kClassify: {
      r.only_keys(root, {"experiment", "name", "seed", "threads", "output", "plot", "modes",
                         "hamiltonian"});
      cfg.modes = r.positive(root, "modes");
      cfg.hamiltonian = r.hamiltonian(r.required(root, "hamiltonian"), cfg.modes);
      break;
    }
    case ExperimentKind::kTypicality: {
      r.only_keys(root, {"experiment", "name", "seed", "threads", "output", "plot", "cases",
                         "bounds", "epsilon", "samples"});
      const YAML::Node cases = r.required(root, "cases");
      if (!cases.IsSequence() || cases.size() == 0) r.fail(cases, "cases: expected a non-empty list");
      for (const auto& c : cases) {
        r.only_keys(c, {"modes", "subsystem_size"});
        TypicalityCase tc{r.positive(c, "modes"), r.positive(c, "subsystem_size")};
        if (tc.modes % 2 != 0) r.fail(c, "typicality needs an even mode count (half filling)");
        if (tc.subsystem_size > tc.modes) r.fail(c, "subsystem_size exceeds modes");
        cfg.cases.push_back(tc);
      }
      const YAML::Node bounds = root["bounds"];
      if (bounds.IsDefined()) {
        if (!bounds.IsSequence()) r.fail(bounds, "bounds: expected a list");
        for (const auto& b : bounds) {
          try {
            cfg.bounds.push_back(parse_bound_kind(r.scalar<std::string>(b, "bounds")));
          } catch (const ConfigError&) {
            throw;
          } catch (const ValidationError& e) {
            r.fail(b, e.what());
          }
        }
      } else {
        cfg.bounds = {BoundKind::kCovarianceTypicality, BoundKind::kCovarianceAtypicality,
                      BoundKind::kEntropyTypicality, BoundKind::kEntropyAtypicality};
      }
      if (root["epsilon"].IsDefined()) {
        cfg.epsilon = r.real_list(root["epsilon"], "epsilon");
        for (double e : cfg.epsilon) {
          if (!(e > 0.0)) r.fail(root["epsilon"], "epsilon values must be positive");
        }
      }
      cfg.samples = static_cast<std::size_t>(r.positive(root, "samples"));
      break;
    }
    case ExperimentKind::kVariance: {
      r.only_keys(root, {"experiment", "name", "seed", "threads", "output", "plot", "system_sizes",
                         "subsystem_size", "samples"});
      cfg.modes_list = r.index_list(r.required(root, "system_sizes"), "system_sizes");
      cfg.subsystem_size = r.positive(root, "subsystem_size");
      cfg.samples = static_cast<std::size_t>(r.positive(root, "samples"));
      if (cfg.modes_list.size() < 3) r.fail(root["system_sizes"], "variance fit needs at least 3 system sizes");
      for (Index n : cfg.modes_list) {
        if (n < 2 * cfg.subsystem_size) r.fail(root["system_sizes"], "every system size must be >= 2 subsystem_size");
      }
      break;
    }
    case ExperimentKind::kOracleCheck: {
      r.only_keys(root, {"experiment", "name", "seed", "threads", "output", "plot", "system_sizes",
                         "models", "times", "t_max", "tolerance"});
      cfg.modes_list = r.index_list(r.required(root, "system_sizes"), "system_sizes");
      for (Index n : cfg.modes_list) {
        if (n % 2 != 0 || n > 12) r.fail(root["system_sizes"], "oracle system sizes must be even and <= 12");
      }
      const YAML::Node models = r.required(root, "models");
      if (!models.IsSequence() || models.size() == 0) r.fail(models, "models: expected a non-empty list");
      for (const auto& m : models) {
        // Validate once at the smallest size; re-instantiated per size at run time.
        r.hamiltonian(m, *std::min_element(cfg.modes_list.begin(), cfg.modes_list.end()));
        cfg.models.push_back(YAML::Dump(m));
      }
      cfg.times = static_cast<std::size_t>(r.positive(root, "times"));
      cfg.t_max = r.get<double>(root, "t_max");
      if (!(cfg.t_max > 0.0)) r.fail(root["t_max"], "t_max must be positive");
      cfg.tolerance = r.get_or<double>(root, "tolerance", 1e-8);
      break;
    }
  }
  return cfg;
}

HamiltonianSpec parse_hamiltonian(const std::string& text, Index modes) {
  return Reader("<hamiltonian>").hamiltonian(YAML::Load(text), modes);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace ffpage::app
