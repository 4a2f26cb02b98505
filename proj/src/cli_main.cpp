#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "entwine/config.hpp"
#include "entwine/errors.hpp"
#include "entwine/experiments.hpp"

namespace entwine {

namespace {

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"entwine: entwined-pair walks, their charge-density difference equations, "
               "and continuum reference solvers"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions opt;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir, format;

  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--seed", seed, "override walker.master_seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--threads", opt.threads, "worker threads (default: ENTWINE_THREADS or all cores)");
  app.add_option("--out", out_dir, "override output.dir");
  app.add_option("--format", format, "override output.format (csv|ndjson)")
      ->check(CLI::IsMember({"csv", "ndjson"}));

  auto* walk = app.add_subcommand("walk", "Monte Carlo ensemble of entwined pairs -> tally NDJSON");
  auto* evolve = app.add_subcommand("evolve", "deterministic stencil evolution -> slice export");
  auto* pde = app.add_subcommand("pde", "continuum reference solution -> slice export");
  auto* compare = app.add_subcommand("compare", "walk-vs-evolve or evolve-vs-pde -> report NDJSON");
  auto* dispersion = app.add_subcommand("dispersion", "dispersion roots over a (k, c) grid -> CSV");
  auto* convergence = app.add_subcommand("convergence", "spacing sweep -> convergence NDJSON");
  auto* validate = app.add_subcommand("validate-config", "parse, validate and echo the config");
  for (auto* sub : {walk, evolve, pde, compare, dispersion, convergence, validate})
    sub->fallthrough();  // accept global options after the subcommand too

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    const ExperimentConfig cfg = load_config(config_path);
    if (seed_set) opt.seed = seed;
    if (!out_dir.empty()) opt.out_dir = out_dir;
    if (!format.empty()) opt.format = format;

    if (walk->parsed()) run_walk(cfg, opt);
    if (evolve->parsed()) run_evolve(cfg, opt);
    if (pde->parsed()) run_pde(cfg, opt);
    if (compare->parsed()) run_compare(cfg, opt);
    if (dispersion->parsed()) run_dispersion(cfg, opt);
    if (convergence->parsed()) run_convergence(cfg, opt);
    if (validate->parsed()) std::cout << echo_config(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace entwine
