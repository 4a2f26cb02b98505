#include "entwine/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <thread>
#include <vector>

#include <json.hpp>

#include "entwine/analysis.hpp"
#include "entwine/continuum.hpp"
#include "entwine/emit.hpp"
#include "entwine/errors.hpp"
#include "entwine/evolve.hpp"
#include "entwine/walker.hpp"

namespace entwine {

namespace fs = std::filesystem;
using nlohmann::json;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ENTWINE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

AlphaField alpha_for(const ExperimentConfig& cfg) {
  if (const auto* fv = std::get_if<FixedVelocity>(&cfg.scaling))
    return AlphaField::constant(fv->a * cfg.lattice.epsilon, cfg.lattice.n_sites);
  const Potential v = sample_potential(cfg.potential, cfg.lattice);
  return AlphaField::from_potential(v, cfg.lattice);
}

ChargeField gaussian_pair_field(const LatticeSpec& spec, double sigma0, double k0) {
  ChargeField f = ChargeField::zeros(spec.n_sites);
  for (int i = 0; i < spec.n_sites; ++i) {
    const Complex psi = analytic_free_gaussian(sigma0, k0, 1.0, spec.site_z(i), 0.0);
    f.phi[0][i] = psi.imag();
    f.phi[1][i] = psi.real();
    f.phi[2][i] = -psi.imag();
    f.phi[3][i] = psi.real();
  }
  return f;
}

namespace {

fs::path prepare_out_dir(const ExperimentConfig& cfg, const RunOptions& opt) {
  const fs::path dir = opt.out_dir.value_or(cfg.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string slice_format(const ExperimentConfig& cfg, const RunOptions& opt) {
  return opt.format.value_or(cfg.output.format);
}

void write_slices(const fs::path& dir, const std::string& stem, const std::string& format,
                  std::span<const ChargeField> slices, const LatticeSpec& spec) {
  if (format == "csv")
    write_slices_csv(dir / (stem + ".csv"), slices, spec);
  else
    write_slices_ndjson(dir / (stem + ".ndjson"), slices, spec);
}

ChargeField initial_field(const ExperimentConfig& cfg, EvolveConfig::Initial fallback) {
  const EvolveConfig::Initial which = cfg.evolve.initial.value_or(fallback);
  switch (which) {
    case EvolveConfig::Initial::Gaussian:
      return gaussian_pair_field(cfg.lattice, cfg.solver.sigma0, cfg.solver.k0);
    case EvolveConfig::Initial::PointSource:
      return ChargeField::point_source(cfg.lattice);
    case EvolveConfig::Initial::Constant: {
      ChargeField f = ChargeField::zeros(cfg.lattice.n_sites);
      for (int i = 0; i < cfg.lattice.n_sites; ++i) {
        f.phi[0][i] = 1.0;
        f.phi[2][i] = -1.0;
      }
      return f;
    }
  }
  throw ValidationError("evolve.initial: unknown variant");
}

std::vector<ChargeField> stencil_reference(const ExperimentConfig& cfg, const AlphaField& alpha,
                                           int n_slices) {
  std::vector<ChargeField> fields;
  fields.reserve(n_slices);
  fields.push_back(ChargeField::point_source(cfg.lattice));
  for (int t = 1; t < n_slices; ++t)
    fields.push_back(step_pair(fields.back(), cfg.lattice, alpha));
  return fields;
}

ChargeField field_from_wave(const ComplexWave& w, long t_index) {
  ChargeField f = ChargeField::zeros(w.n_sites());
  for (int i = 0; i < w.n_sites(); ++i) {
    f.phi[0][i] = w.values[i].imag();
    f.phi[1][i] = w.values[i].real();
    f.phi[2][i] = -w.values[i].imag();
    f.phi[3][i] = w.values[i].real();
  }
  f.t_index = t_index;
  f.normalization = Normalization::Renormalized;
  return f;
}

}  // namespace

void run_walk(const ExperimentConfig& cfg, const RunOptions& opt) {
  const fs::path dir = prepare_out_dir(cfg, opt);
  const AlphaField alpha = alpha_for(cfg);
  WalkerParams params;
  params.t_r_steps = cfg.walker.t_r_steps;
  params.max_steps = cfg.walker.max_steps;
  params.turnaround_strictly_after = cfg.walker.turnaround_strictly_after;
  const std::uint64_t seed = opt.seed.value_or(cfg.walker.master_seed);
  const TallyWindow window{static_cast<int>(params.t_r_steps), cfg.lattice.n_sites,
                           -(cfg.lattice.n_sites / 2)};
  const EnsembleStats stats = run_ensemble(seed, cfg.walker.n_walkers, alpha, params, window,
                                           resolve_threads(opt.threads));

  NdjsonWriter out(dir / "tally.ndjson");
  for (int t = 0; t < window.n_slices; ++t)
    for (int site = 0; site < window.n_sites; ++site)
      for (int d = 0; d < 2; ++d)
        for (int e = 0; e < 2; ++e) {
          json j;
          j["t"] = t;
          j["z"] = window.z_min + site;
          j["dir"] = d == 0 ? "minus" : "plus";
          j["env"] = e == 0 ? "left" : "right";
          j["sum"] = stats.sum(t, site, d, e);
          j["hits"] = stats.hits(t, site, d, e);
          j["mean"] = stats.mean(t, site, d, e);
          j["se"] = stats.std_error(t, site, d, e);
          out.record(j);
        }
  out.close();

  if (cfg.walker.trace_paths > 0) {
    NdjsonWriter trace(dir / "trace.ndjson");
    const long n = std::min<long>(cfg.walker.trace_paths, cfg.walker.n_walkers);
    for (long w = 0; w < n; ++w) {
      PhiloxStream stream = PhiloxStream::child(seed, static_cast<std::uint64_t>(w));
      const EntwinedPath path = generate_entwined_pair(stream, alpha, params);
      json j;
      j["walker"] = w;
      j["seed"] = seed;
      j["t_stop"] = path.t_stop;
      j["forward_z"] = path.forward_z;
      j["return_z"] = path.return_z;
      j["marker_t"] = path.marker_t;
      trace.record(j);
    }
    trace.close();
  }
}

void run_evolve(const ExperimentConfig& cfg, const RunOptions& opt) {
  const fs::path dir = prepare_out_dir(cfg, opt);
  if (std::holds_alternative<Diffusive>(cfg.scaling)) {
    const Potential v = sample_potential(cfg.potential, cfg.lattice);
    const ChargeField init = initial_field(cfg, EvolveConfig::Initial::Gaussian);
    const auto slices = stroboscope_evolve(init, cfg.lattice, cfg.scaling, v,
                                           static_cast<int>(cfg.evolve.n_macro),
                                           cfg.evolve.alpha_at_arrival);
    write_slices(dir, "slices", slice_format(cfg, opt), slices, cfg.lattice);
  } else {
    const ChargeField init = initial_field(cfg, EvolveConfig::Initial::Constant);
    const auto slices = evolve_fixed_velocity(init, cfg.lattice, cfg.scaling, cfg.evolve.n_steps,
                                              cfg.evolve.emit_every);
    write_slices(dir, "slices", slice_format(cfg, opt), slices, cfg.lattice);
  }
}

void run_pde(const ExperimentConfig& cfg, const RunOptions& opt) {
  const fs::path dir = prepare_out_dir(cfg, opt);
  LatticeSpec label_spec = cfg.lattice;  // slice times are multiples of dt here
  label_spec.epsilon = cfg.solver.dt;
  std::vector<ChargeField> slices;
  if (const auto* d = std::get_if<Diffusive>(&cfg.scaling)) {
    const Potential v = sample_potential(cfg.potential, cfg.lattice);
    CrankNicolson cn(cfg.lattice, d->D, v, cfg.solver.dt);
    ComplexWave psi = pack_complex(initial_field(cfg, EvolveConfig::Initial::Gaussian));
    slices.push_back(field_from_wave(psi, 0));
    for (long s = 1; s <= cfg.solver.n_steps; ++s) {
      cn.step(psi);
      if (s % cfg.evolve.emit_every == 0 || s == cfg.solver.n_steps)
        slices.push_back(field_from_wave(psi, s));
    }
  } else {
    const auto& fv = std::get<FixedVelocity>(cfg.scaling);
    const ChargeField init = initial_field(cfg, EvolveConfig::Initial::Constant);
    for (long s = 0; s <= cfg.solver.n_steps; ++s) {
      if (s % cfg.evolve.emit_every != 0 && s != cfg.solver.n_steps) continue;
      ChargeField f = spectral_dirac_evolve(init, cfg.lattice, fv.c, fv.a, s * cfg.solver.dt);
      f.t_index = s;
      f.normalization = Normalization::Renormalized;
      slices.push_back(std::move(f));
    }
  }
  write_slices(dir, "pde", slice_format(cfg, opt), slices, label_spec);
}

void run_compare(const ExperimentConfig& cfg, const RunOptions& opt) {
  const fs::path dir = prepare_out_dir(cfg, opt);
  NdjsonWriter out(dir / "report.ndjson");
  if (cfg.compare.mode == CompareConfig::Mode::WalkVsEvolve) {
    const AlphaField alpha = alpha_for(cfg);
    WalkerParams params;
    params.t_r_steps = cfg.walker.t_r_steps;
    params.max_steps = cfg.walker.max_steps;
    params.turnaround_strictly_after = cfg.walker.turnaround_strictly_after;
    const std::uint64_t seed = opt.seed.value_or(cfg.walker.master_seed);
    const TallyWindow window{static_cast<int>(params.t_r_steps), cfg.lattice.n_sites,
                             -(cfg.lattice.n_sites / 2)};
    const EnsembleStats stats = run_ensemble(seed, cfg.walker.n_walkers, alpha, params, window,
                                             resolve_threads(opt.threads));
    const auto reference = stencil_reference(cfg, alpha, window.n_slices);
    const ComparisonReport rep = compare_ensemble(stats, reference, cfg.lattice);
    json j;
    j["mode"] = "walk_vs_evolve";
    j["n_walkers"] = stats.n_walkers();
    j["master_seed"] = seed;
    j["bins_compared"] = rep.bins_compared;
    j["excluded_zero"] = rep.excluded_zero;
    j["frac_within_3se"] = rep.frac_within_3se;
    j["frac_within_5se"] = rep.frac_within_5se;
    j["worst_z"] = rep.worst_z;
    j["worst_bin"] = {{"t", rep.worst_t},
                      {"site", rep.worst_site},
                      {"dir", rep.worst_dir},
                      {"env", rep.worst_env}};
    out.record(j);
  } else {
    if (!std::holds_alternative<Diffusive>(cfg.scaling))
      throw ValidationError("compare.mode evolve_vs_pde requires diffusive scaling");
    const auto& d = std::get<Diffusive>(cfg.scaling);
    const Potential v = sample_potential(cfg.potential, cfg.lattice);
    const ChargeField init = initial_field(cfg, EvolveConfig::Initial::Gaussian);
    const auto slices = stroboscope_evolve(init, cfg.lattice, cfg.scaling, v,
                                           static_cast<int>(cfg.evolve.n_macro),
                                           cfg.evolve.alpha_at_arrival);
    // march the reference in lockstep, an integer number of CN steps per
    // stroboscope macro step
    const double macro_dt = 8.0 * cfg.lattice.epsilon;
    const long per_macro = std::max<long>(1, std::lround(macro_dt / cfg.solver.dt));
    CrankNicolson cn(cfg.lattice, d.D, v, macro_dt / per_macro);
    ComplexWave psi = pack_complex(init);
    for (std::size_t m = 0; m < slices.size(); ++m) {
      if (m > 0)
        for (long s = 0; s < per_macro; ++s) cn.step(psi);
      const ComplexWave num = pack_complex(slices[m]);
      json j;
      j["mode"] = "evolve_vs_pde";
      j["t"] = slices[m].t_index * cfg.lattice.epsilon;
      j["l2"] = l2_error(num, psi, cfg.lattice.delta);
      j["linf"] = linf_error(num, psi);
      out.record(j);
    }
  }
  out.close();
}

void run_dispersion(const ExperimentConfig& cfg, const RunOptions& opt) {
  const fs::path dir = prepare_out_dir(cfg, opt);
  const std::vector<std::string> header{"k", "c", "omega_low", "omega_high", "kg_residual"};
  CsvWriter csv(dir / "dispersion.csv", header);
  std::vector<std::string> cells(header.size());
  for (const double c : cfg.dispersion.c_values)
    for (const double k : cfg.dispersion.k_values) {
      const DispersionQuery q{k, c, 1.0, 1.0};
      const DispersionRoots roots = modified_schrodinger_dispersion(q);
      const double res =
          std::max(kg_consistency(roots.omega_low, q), kg_consistency(roots.omega_high, q));
      cells[0] = format_float(k);
      cells[1] = format_float(c);
      cells[2] = format_float(roots.omega_low);
      cells[3] = format_float(roots.omega_high);
      cells[4] = format_float(res);
      csv.row(cells);
    }
  csv.close();
}

ConvergenceReport convergence_sweep(const ConvergenceCase& c) {
  const bool with_potential = c.potential.kind != PotentialSpec::Kind::Zero;

  // fine-grid reference for the potential case; the free case has the
  // closed-form packet
  LatticeSpec fine;
  std::vector<Complex> fine_psi;
  if (with_potential) {
    const double df = c.deltas.back() / 2.0;
    fine = make_diffusive_spec(df, c.D, static_cast<int>(std::lround(c.domain_length / df))).first;
    const Potential vf = sample_potential(c.potential, fine);
    const long steps = 4096;
    CrankNicolson cn(fine, c.D, vf, c.t_final / steps);
    ComplexWave psi = pack_complex(gaussian_pair_field(fine, c.sigma0, c.k0));
    for (long s = 0; s < steps; ++s) cn.step(psi);
    fine_psi = psi.values;
  }

  std::vector<double> errors;
  for (const double delta : c.deltas) {
    const auto [spec, mode] =
        make_diffusive_spec(delta, c.D, static_cast<int>(std::lround(c.domain_length / delta)));
    const double steps_real = c.t_final / spec.epsilon;
    const long steps = std::lround(steps_real);
    if (steps % 8 != 0 || std::abs(steps_real - steps) > 1e-9 * steps)
      throw ValidationError("convergence: t_final must be a multiple of 8*epsilon at delta = " +
                            format_float(delta));
    const Potential v = sample_potential(c.potential, spec);
    const ChargeField init = gaussian_pair_field(spec, c.sigma0, c.k0);
    const auto slices = stroboscope_evolve(init, spec, mode, v, static_cast<int>(steps / 8));
    const ComplexWave num = pack_complex(slices.back());
    ComplexWave ref;
    ref.values.resize(spec.n_sites);
    if (with_potential) {
      const int stride = static_cast<int>(std::lround(spec.delta / fine.delta));
      for (int i = 0; i < spec.n_sites; ++i) ref.values[i] = fine_psi[i * stride];
    } else {
      for (int i = 0; i < spec.n_sites; ++i)
        ref.values[i] = analytic_free_gaussian(c.sigma0, c.k0, c.D, spec.site_z(i), c.t_final);
    }
    errors.push_back(l2_error(num, ref, spec.delta));
  }
  return empirical_order(c.deltas, errors);
}

void run_convergence(const ExperimentConfig& cfg, const RunOptions& opt) {
  const fs::path dir = prepare_out_dir(cfg, opt);
  const auto* dptr = std::get_if<Diffusive>(&cfg.scaling);
  if (dptr == nullptr) throw ValidationError("convergence: requires diffusive scaling");
  ConvergenceCase c;
  c.deltas = cfg.convergence.deltas;
  c.D = dptr->D;
  c.t_final = cfg.convergence.t_final;
  c.domain_length = cfg.convergence.domain_length;
  c.sigma0 = cfg.solver.sigma0;
  c.k0 = cfg.solver.k0;
  c.potential = cfg.potential;
  const ConvergenceReport rep = convergence_sweep(c);
  const bool with_potential = c.potential.kind != PotentialSpec::Kind::Zero;
  NdjsonWriter out(dir / "convergence.ndjson");
  json j;
  j["case"] = with_potential ? "potential" : "free";
  j["t_final"] = c.t_final;
  j["deltas"] = rep.deltas;
  j["errors"] = rep.errors;
  j["orders"] = rep.orders;
  j["summary_order"] = rep.summary_order;
  j["converged"] = rep.converged;
  out.record(j);
  out.close();
}

}  // namespace entwine
