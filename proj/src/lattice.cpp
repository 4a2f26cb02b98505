#include "entwine/lattice.hpp"

#include <cmath>
#include <limits>

namespace entwine {

ChargeField ChargeField::zeros(int n_sites) {
  if (n_sites < 2) throw ValidationError("ChargeField: n_sites must be >= 2");
  ChargeField f;
  for (auto& p : f.phi) p.assign(n_sites, 0.0);
  return f;
}

ChargeField ChargeField::point_source(const LatticeSpec& spec) {
  ChargeField f = zeros(spec.n_sites);
  f.phi[0][spec.origin_site()] = -1.0;
  f.phi[3][spec.origin_site()] = +1.0;
  return f;
}

AlphaField AlphaField::constant(double alpha, int n_sites) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ValidationError("AlphaField: alpha must lie in [0, 1]");
  if (n_sites < 2) throw ValidationError("AlphaField: n_sites must be >= 2");
  return AlphaField(std::vector<double>(n_sites, alpha), n_sites / 2, true);
}

AlphaField AlphaField::from_potential(const Potential& v, const LatticeSpec& spec) {
  if (static_cast<int>(v.values.size()) != spec.n_sites)
    throw ValidationError("AlphaField: potential length does not match n_sites");
  std::vector<double> a(v.values.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = reversal_probability(v.values[i], spec.epsilon).alpha;
  return AlphaField(std::move(a), spec.origin_site(), false);
}

std::pair<LatticeSpec, ScalingMode> make_diffusive_spec(double delta, double D, int n_sites) {
  if (!(delta > 0.0)) throw ValidationError("make_diffusive_spec: delta must be > 0");
  if (!(D > 0.0)) throw ValidationError("make_diffusive_spec: D must be > 0");
  if (n_sites < 2) throw ValidationError("make_diffusive_spec: n_sites must be >= 2");
  LatticeSpec spec;
  spec.delta = delta;
  spec.epsilon = delta * delta / (2.0 * D);
  spec.n_sites = n_sites;
  spec.boundary = Boundary::Periodic;
  return {spec, ScalingMode(Diffusive{D})};
}

std::pair<LatticeSpec, ScalingMode> make_fixed_velocity_spec(double epsilon, double c, double a,
                                                             int n_sites) {
  if (!(epsilon > 0.0)) throw ValidationError("make_fixed_velocity_spec: epsilon must be > 0");
  if (!(c > 0.0)) throw ValidationError("make_fixed_velocity_spec: c must be > 0");
  if (!(a > 0.0)) throw ValidationError("make_fixed_velocity_spec: a must be > 0");
  if (!(a * epsilon < 1.0))
    throw ValidationError("make_fixed_velocity_spec: a*epsilon = " + std::to_string(a * epsilon) +
                          " is not a valid reversal probability (must be < 1)");
  if (n_sites < 2) throw ValidationError("make_fixed_velocity_spec: n_sites must be >= 2");
  LatticeSpec spec;
  spec.delta = c * epsilon;
  spec.epsilon = epsilon;
  spec.n_sites = n_sites;
  spec.boundary = Boundary::Periodic;
  return {spec, ScalingMode(FixedVelocity{c, a})};
}

StepProbabilities reversal_probability(double v, double epsilon) {
  if (!std::isfinite(v)) throw ValidationError("reversal_probability: v must be finite");
  if (!(epsilon > 0.0)) throw ValidationError("reversal_probability: epsilon must be > 0");
  const double x = 2.0 * v * epsilon;
  double alpha;
  if (x >= 0.0)
    alpha = 1.0 / (1.0 + std::exp(-x));
  else {
    const double e = std::exp(x);
    alpha = e / (1.0 + e);
  }
  StepProbabilities p;
  p.saturated = false;
  // keep alpha strictly inside (0,1); |v*eps| >~ 19 pins the logistic to an
  // endpoint in double precision
  const double lo = std::numeric_limits<double>::min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (alpha < lo) {
    alpha = lo;
    p.saturated = true;
  } else if (alpha > hi) {
    alpha = hi;
    p.saturated = true;
  }
  p.alpha = alpha;
  p.beta = 1.0 - alpha;
  return p;
}

Potential sample_potential(const PotentialSpec& desc, const LatticeSpec& spec) {
  if (!std::isfinite(desc.v0))
    throw ValidationError("sample_potential: descriptor amplitude must be finite");
  if (std::abs(desc.v0) >= desc.bound)
    throw ValidationError("sample_potential: descriptor exceeds the configured bound");
  Potential pot;
  pot.values.assign(spec.n_sites, 0.0);
  const int n = spec.n_sites;
  switch (desc.kind) {
    case PotentialSpec::Kind::Zero:
      pot.descriptor = "zero";
      break;
    case PotentialSpec::Kind::Cosine: {
      pot.descriptor = "cosine";
      const double w = 2.0 * M_PI * desc.periods / n;
      for (int i = 0; i < n; ++i) pot.values[i] = desc.v0 * std::cos(w * i);
      break;
    }
    case PotentialSpec::Kind::Barrier:
      pot.descriptor = "barrier";
      for (int i = n / 3; i < 2 * n / 3; ++i) pot.values[i] = desc.v0;
      break;
    case PotentialSpec::Kind::Well:
      pot.descriptor = "well";
      for (int i = n / 3; i < 2 * n / 3; ++i) pot.values[i] = -desc.v0;
      break;
  }
  return pot;
}

double compton_scale(const PhysicalConstants& pc) {
  if (!(pc.m > 0.0))
    throw ValidationError("compton_scale: massless particles have no Compton scale");
  if (!(pc.c > 0.0)) throw ValidationError("compton_scale: c must be > 0");
  return pc.hbar / (pc.m * pc.c);
}

}  // namespace entwine
