// ffpage command-line driver: run experiments, compare curve tables.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ffpage/app/config.hpp"
#include "ffpage/app/experiments.hpp"
#include "ffpage/error.hpp"

namespace {

using namespace ffpage;

int cmd_run(const std::string& path, const app::RunOptions& options) {
  try {
    const app::ExperimentConfig cfg = app::load_config(path);
    const app::RunReport report = app::run(cfg, options);
    for (const auto& f : report.files) std::cout << "wrote " << f.string() << "\n";
    if (!report.output.ok) {
      std::cerr << "ffpage: check failed: " << report.output.failure << "\n";
      return 1;
    }
    std::cout << "summary: " << report.output.summary.dump() << "\n";
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "ffpage: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "ffpage: numerical invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "ffpage: " << e.what() << "\n";
    return 3;
  }
}

int cmd_compare(const std::string& a, const std::string& b, double tol) {
  try {
    const auto ta = app::Table::parse(app::read_text_file(a), a);
    const auto tb = app::Table::parse(app::read_text_file(b), b);
    const app::CompareReport r = app::compare_tables(ta, tb, tol);
    std::cout << "subsystem_size,density_a,density_b,abs_difference\n";
    for (const auto& p : r.points) {
      std::cout << p.subsystem_size << "," << app::format_double(p.density_a) << ","
                << app::format_double(p.density_b) << "," << app::format_double(p.abs_difference)
                << "\n";
    }
    std::cout << "max_difference " << app::format_double(r.max_difference) << " tolerance "
              << app::format_double(tol) << " " << (r.pass ? "PASS" : "FAIL") << "\n";
    return r.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "ffpage: compare: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Free-fermion Page curves: ensembles, quenches and their closed forms"};
  cli.set_version_flag("--version", std::string(app::version()));
  cli.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_dir;
  auto* run = cli.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config (YAML)")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  auto* threads_opt = run->add_option("--threads", threads, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  auto* out_opt = run->add_option("--out", out_dir, "output directory");

  std::string file_a;
  std::string file_b;
  double tol = 0.0;
  auto* compare = cli.add_subcommand("compare", "compare two Page-curve tables pointwise in S/N");
  compare->add_option("a", file_a)->required()->check(CLI::ExistingFile);
  compare->add_option("b", file_b)->required()->check(CLI::ExistingFile);
  compare->add_option("--tol", tol, "pass if every |S_a/N - S_b/N| <= tol")->required();

  auto* list = cli.add_subcommand("list-experiments", "list experiment kinds");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? 0 : 2;
  }

  if (*run) {
    app::RunOptions options;
    if (*seed_opt) options.seed = seed;
    if (*threads_opt) options.threads = threads;
    if (*out_opt) options.out = out_dir;
    return cmd_run(config_path, options);
  }
  if (*compare) return cmd_compare(file_a, file_b, tol);
  if (*list) {
    for (auto kind : app::all_experiment_kinds()) {
      std::printf("%-14s %s\n", std::string(app::to_string(kind)).c_str(),
                  std::string(app::describe(kind)).c_str());
    }
    return 0;
  }
  return 2;
}
