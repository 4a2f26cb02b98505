#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entwine/lattice.hpp"

namespace entwine {

struct WalkerConfig {
  std::uint64_t master_seed = 1;
  long n_walkers = 10000;
  std::int64_t t_r_steps = 32;
  std::int64_t max_steps = 1000000;
  bool turnaround_strictly_after = false;  // "turnaround": "geq" (default) or "gt"
  int trace_paths = 0;                     // export the first N paths as NDJSON
};

struct SolverConfig {
  double dt = 1e-3;
  long n_steps = 100;
  double sigma0 = 1.0;  // Gaussian initial data
  double k0 = 0.0;
};

struct EvolveConfig {
  enum class Initial { Gaussian, Constant, PointSource };
  long n_macro = 8;       // diffusive stroboscope macro steps
  long n_steps = 100;     // fixed-velocity micro steps
  long emit_every = 1;
  std::optional<Initial> initial;  // default: Gaussian (diffusive) / Constant (fixed-velocity)
  bool alpha_at_arrival = false;   // "alpha_site": "departure" (default) or "arrival"
};

struct DispersionConfig {
  std::vector<double> k_values{0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> c_values{1.0, 2.0, 4.0, 8.0, 16.0};
};

struct ConvergenceConfig {
  std::vector<double> deltas{0.125, 0.0625, 0.03125};
  double t_final = 0.5;
  double domain_length = 16.0;
};

struct CompareConfig {
  enum class Mode { WalkVsEvolve, EvolveVsPde };
  Mode mode = Mode::WalkVsEvolve;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";  // "csv" or "ndjson"
};

struct ExperimentConfig {
  int schema = 1;
  LatticeSpec lattice;
  ScalingMode scaling = Diffusive{0.5};
  PotentialSpec potential;
  WalkerConfig walker;
  SolverConfig solver;
  EvolveConfig evolve;
  DispersionConfig dispersion;
  ConvergenceConfig convergence;
  CompareConfig compare;
  OutputConfig output;
};

/// Parse and validate a JSON config document. Unknown fields are rejected;
/// errors carry the offending field path. The lattice is completed from the
/// scaling mode: diffusive configs provide `delta`, fixed-velocity configs
/// provide `epsilon`.
ExperimentConfig parse_config(const std::string& json_text);

/// Deterministic normalized echo of a validated config (defaults filled in,
/// keys sorted).
std::string echo_config(const ExperimentConfig& cfg);

}  // namespace entwine
