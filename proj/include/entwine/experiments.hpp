#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "entwine/analysis.hpp"
#include "entwine/config.hpp"
#include "entwine/lattice.hpp"

namespace entwine {

/// Command-line overrides applied on top of the config file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: ENTWINE_THREADS env var, then hardware concurrency
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

int resolve_threads(int requested);

/// Reversal probabilities for the configured regime: per-site from the
/// potential under diffusive scaling, the constant a*epsilon under
/// fixed-velocity scaling.
AlphaField alpha_for(const ExperimentConfig& cfg);

/// Gaussian packet as a four-component field: (phi1, phi2) = (Im, Re) psi0
/// and the conjugate partner (phi3, phi4) = (-phi1, phi2).
ChargeField gaussian_pair_field(const LatticeSpec& spec, double sigma0, double k0);

/// One spacing sweep of the stroboscoped evolution against a fixed-time
/// reference: the closed-form packet when the potential is zero, a fine-grid
/// Crank-Nicolson run otherwise.
struct ConvergenceCase {
  std::vector<double> deltas;
  double D = 0.5;
  double t_final = 0.5;
  double domain_length = 16.0;
  double sigma0 = 1.0;
  double k0 = 0.0;
  PotentialSpec potential;
};
ConvergenceReport convergence_sweep(const ConvergenceCase& c);

void run_walk(const ExperimentConfig& cfg, const RunOptions& opt);
void run_evolve(const ExperimentConfig& cfg, const RunOptions& opt);
void run_pde(const ExperimentConfig& cfg, const RunOptions& opt);
void run_compare(const ExperimentConfig& cfg, const RunOptions& opt);
void run_dispersion(const ExperimentConfig& cfg, const RunOptions& opt);
void run_convergence(const ExperimentConfig& cfg, const RunOptions& opt);

/// Full command-line entry point (also used directly by the tests).
int cli_main(int argc, const char* const* argv);

}  // namespace entwine
