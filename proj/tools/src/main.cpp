#include "qrf/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace qrf;

int main(int argc, char** argv) {
  CLI::App app{"qrf: perspective-neutral quantum reference frames"};
  app.require_subcommand(1);

  std::string config, format = "table", out_path;
  std::uint64_t seed = RunOptions{}.seed;
  double tol = Tolerance::from_env().abs_tol;

  auto* run_cmd = app.add_subcommand("run", "run a scenario config or builtin and report the checks");
  run_cmd->add_option("config", config, "config file or builtin scenario name")->required();
  run_cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "table"}));
  run_cmd->add_option("--tol", tol, "numerical tolerance (default QRF_TOL or 1e-9)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "seed for random states and observables");
  run_cmd->add_option("--out", out_path, "write the report here instead of stdout");

  auto* list = app.add_subcommand("list-builtins", "list the builtin scenarios");
  auto* check = app.add_subcommand("check", "validate a config without running it");
  check->add_option("config", config, "config file or builtin scenario name")->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& b : list_builtins())
      std::cout << b.name << (b.expect_pass ? "" : "  (expected to fail)") << "\n    " << b.description << "\n";
    return 0;
  }

  ScenarioConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const std::exception& e) {
    std::cerr << "qrf: " << e.what() << "\n";
    return 2;
  }
  if (check->parsed()) {
    std::cout << cfg.name << ": ok (" << cfg.subsystems.size() << " subsystems, " << cfg.frames.size()
              << " frames, " << cfg.tasks.size() << " tasks)\n";
    return 0;
  }

  RunOptions opts;
  opts.seed = seed;
  opts.tol.abs_tol = tol;
  opts.tol.rel_tol = tol;
  Report rep = qrf::run(cfg, opts);
  std::string text = emit(rep, format == "json" ? Format::json : Format::table);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path);
    if (!os) {
      std::cerr << "qrf: cannot write " << out_path << "\n";
      return 2;
    }
    os << text;
  }
  return rep.ok() ? 0 : 1;
}
