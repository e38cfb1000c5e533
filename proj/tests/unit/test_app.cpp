#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <limits>
#include <unistd.h>

#include "ffpage/app/config.hpp"
#include "ffpage/app/experiments.hpp"
#include "ffpage/app/table.hpp"
#include "ffpage/parallel.hpp"

using namespace ffpage;
using namespace ffpage::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("ffpage-test-" + std::to_string(::getpid()) + "-" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int error_line(const std::string& text) {
  try {
    (void)parse_config(text, "t.yaml");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const char* kSmallRfg = R"(experiment: rfg-curve
name: small
seed: 4
modes: 16
samples: 40
sizes: [2, 4, 8]
)";

const char* kSmallDyn = R"(experiment: dyn-curve
name: dyn
seed: 7
modes: 16
hamiltonian: {preset: odd-range, coupling: 0.5, range: 3}
time_grid: {scheme: uniform-window, t_min: 10, t_max: 100, samples: 16}
sizes: {from: 2, to: 8, step: 2}
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(kSmallDyn);
  CHECK(cfg.kind == ExperimentKind::kDynCurve);
  CHECK(cfg.sizes == std::vector<Index>{2, 4, 6, 8});
  CHECK(cfg.hamiltonian.hoppings.size() == 2);
  CHECK(cfg.grid.samples == 16);
  CHECK(cfg.raw_text == kSmallDyn);

  const auto custom = parse_config(R"(experiment: classify
name: c
seed: 1
modes: 8
hamiltonian:
  hoppings:
    - {range: 1, even: 1.0, odd: 1.0}
    - {range: 2, even: [0.0, 0.5], odd: -0.5}
)");
  REQUIRE(custom.hamiltonian.hoppings.size() == 2);
  CHECK(custom.hamiltonian.hoppings[1].even_amplitude == Complex(0.0, 0.5));
  CHECK(custom.hamiltonian.hoppings[1].odd_amplitude == Complex(-0.5, 0.0));

  for (ExperimentKind k : all_experiment_kinds()) {
    CHECK(parse_experiment_kind(to_string(k)) == k);
    CHECK_FALSE(describe(k).empty());
  }
}

TEST_CASE("config errors name the offending line") {
  CHECK(error_line("experiment: rfg-curve\nname: x\nseed: 1\nmodes: 16\nsamples: 4\nsizes: [2]\nbogus: 3\n") == 7);
  CHECK(error_line("experiment: rfg-curve\nname: x\nseed: 1\nmodes: -16\nsamples: 4\nsizes: [2]\n") == 4);
  CHECK(error_line("experiment: nope\nname: x\nseed: 1\n") == 1);
  CHECK(error_line("experiment: rfg-curve\nname: x\nmodes: 16\nsamples: 4\nsizes: [2]\n") >= 0);
  CHECK(error_line("experiment: rfg-curve\nname: x\nseed: 1\nmodes: 16\nsamples: 4\nsizes: [2, 40]\n") == 6);
  CHECK(error_line(std::string(kSmallDyn) + "extra: [1\n") > 0);
  try {
    (void)parse_config("experiment: rfg-curve\nname: x\nseed: 1\nmodes: 16\nsamples: 4\nsizes: [2]\nbogus: 3\n", "t.yaml");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("t.yaml:7:", 0) == 0);
  }
}

TEST_CASE("tables round-trip bit-exactly") {
  Table t("curve", {"n", "x", "label", "flag"}, {"modes", "bits", "", ""});
  t.set_meta("seed", "42");
  const double tricky[] = {0.1, 1.0 / 3.0, 5e-324, -0.0, 1e300, std::numeric_limits<double>::max()};
  long long i = 0;
  for (double v : tricky) t.add_row({i++, v, std::string("row"), i % 2 == 0});
  const Table back = Table::parse(t.serialize());
  CHECK(back == t);
  CHECK(back.serialize() == t.serialize());
  for (std::size_t r = 0; r < 6; ++r) CHECK(back.number(r, "x") == tricky[r]);
  CHECK(back.meta("seed") == "42");
  CHECK_FALSE(back.meta("missing").has_value());
  CHECK_THROWS_AS((void)back.column("nope"), ValidationError);
  CHECK_THROWS_AS(t.add_row({1LL}), ValidationError);
  CHECK_THROWS_AS(Table::parse("a,b\n1,2\n"), ValidationError);
  CHECK(format_double(0.1) == "0.1");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("curve tables and comparison") {
  PageCurve c;
  c.modes = 10;
  c.source = CurveSource::kSeriesRfg;
  c.model = "m";
  c.points = {{2, 1.5, 0.0}, {5, 3.0, 0.1}};
  const Table t = curve_table(c, "c");
  const PageCurve back = curve_from_table(t);
  CHECK(back.points[1].entropy == 3.0);
  CHECK(back.source == CurveSource::kSeriesRfg);
  CHECK(t.number(1, "density") == doctest::Approx(0.3));

  PageCurve shifted = c;
  shifted.points[1].entropy = 3.05;
  const auto rep = compare_tables(t, curve_table(shifted, "c"), 0.01);
  CHECK(rep.max_difference == doctest::Approx(0.005));
  CHECK(rep.pass);
  CHECK_FALSE(compare_tables(t, curve_table(shifted, "c"), 0.001).pass);
  shifted.points[1].subsystem_size = 6;
  CHECK_THROWS_AS(compare_tables(t, curve_table(shifted, "c"), 0.01), ValidationError);
}

TEST_CASE("execution is deterministic across thread counts") {
  for (const char* text : {kSmallRfg, kSmallDyn}) {
    const auto cfg = parse_config(text);
    set_thread_count(1);
    const auto a = execute(cfg);
    set_thread_count(3);
    const auto b = execute(cfg);
    set_thread_count(0);
    REQUIRE(a.tables.size() == b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i) {
      CHECK(a.tables[i].serialize() == b.tables[i].serialize());
      CHECK(a.tables[i].meta("config_sha256") == sha256_hex(text));
    }
  }
}

TEST_CASE("runs write tables, run.json and honour the output precedence") {
  const fs::path dir = scratch_dir("run");
  const fs::path cfg_path = dir / "small.yaml";
  write_text_file(cfg_path, kSmallRfg);
  const auto cfg = load_config(cfg_path);

  RunOptions opts;
  opts.out = dir / "explicit";
  opts.seed = 99;
  const auto report = run(cfg, opts);
  CHECK(report.directory == dir / "explicit");
  CHECK(fs::exists(dir / "explicit" / "rfg.csv"));
  const auto json = nlohmann::json::parse(read_text_file(dir / "explicit" / "run.json"));
  CHECK(json["config_text"].get<std::string>() == kSmallRfg);
  CHECK(json["seed"].get<std::uint64_t>() == 99);
  CHECK(json["seed_overridden"].get<bool>());
  CHECK(json["ok"].get<bool>());
  CHECK(Table::parse(read_text_file(dir / "explicit" / "rfg.csv")).meta("seed") == "99");

  ::setenv(kOutputDirEnv, (dir / "env").c_str(), 1);
  CHECK(resolve_output_dir(cfg, {}) == dir / "env" / "small");
  auto with_output = cfg;
  with_output.output = (dir / "cfg").string();
  CHECK(resolve_output_dir(with_output, {}) == dir / "cfg" / "small");
  ::unsetenv(kOutputDirEnv);
  CHECK(resolve_output_dir(cfg, {}) == fs::path("results") / "small");
  fs::remove_all(dir);
}

TEST_CASE("classification and oracle runs") {
  const auto classify = execute(parse_config(
      "experiment: classify\nname: c\nseed: 1\nmodes: 16\nhamiltonian: {preset: even-range, coupling: 0.3, range: 2}\n"));
  REQUIRE(classify.tables.size() == 1);
  CHECK(classify.tables[0].meta("theorem2_satisfied") == "false");
  CHECK(classify.tables[0].row_count() == 16);

  const auto oracle = execute(parse_config(R"(experiment: oracle-check
name: o
seed: 3
system_sizes: [4, 6]
models: [{preset: minimal}]
times: 3
t_max: 5
tolerance: 1.0e-8
)"));
  CHECK(oracle.ok);
  CHECK(oracle.tables[0].row_count() > 0);
}
