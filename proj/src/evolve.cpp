#include "entwine/evolve.hpp"

#include <cmath>
#include <utility>

namespace entwine {

namespace {

// shared kernel: sign = +1 selects the left-envelope scattering pattern,
// sign = -1 the right-envelope one
void envelope_step(const std::vector<double>& in_minus_mover, const std::vector<double>& in_plus_mover,
                   std::vector<double>& out_minus_mover, std::vector<double>& out_plus_mover,
                   const AlphaField& alpha, double sign, bool alpha_at_arrival) {
  const int n = static_cast<int>(in_minus_mover.size());
  for (int i = 0; i < n; ++i) {
    const int ip = i + 1 == n ? 0 : i + 1;
    const int im = i == 0 ? n - 1 : i - 1;
    const double a_p = alpha.at(alpha_at_arrival ? i : ip);
    const double a_m = alpha.at(alpha_at_arrival ? i : im);
    out_minus_mover[i] = (1.0 - a_p) * in_minus_mover[ip] - sign * a_m * in_plus_mover[im];
    out_plus_mover[i] = (1.0 - a_m) * in_plus_mover[im] + sign * a_p * in_minus_mover[ip];
  }
}

void check_field(const ChargeField& field, const LatticeSpec& spec) {
  if (field.n_sites() != spec.n_sites)
    throw ValidationError("evolve: field length does not match n_sites");
  if (spec.boundary != Boundary::Periodic)
    throw ValidationError("evolve: stencil steps require a periodic boundary");
}

void scale_field(ChargeField& field, double factor) {
  for (auto& component : field.phi)
    for (double& x : component) x *= factor;
}

}  // namespace

ChargeField step_left(const ChargeField& field, const LatticeSpec& spec, const AlphaField& alpha,
                      bool alpha_at_arrival) {
  check_field(field, spec);
  ChargeField out = field;
  envelope_step(field.phi[0], field.phi[1], out.phi[0], out.phi[1], alpha, +1.0,
                alpha_at_arrival);
  out.t_index = field.t_index + 1;
  return out;
}

ChargeField step_right(const ChargeField& field, const LatticeSpec& spec, const AlphaField& alpha,
                       bool alpha_at_arrival) {
  check_field(field, spec);
  ChargeField out = field;
  envelope_step(field.phi[2], field.phi[3], out.phi[2], out.phi[3], alpha, -1.0,
                alpha_at_arrival);
  out.t_index = field.t_index + 1;
  return out;
}

ChargeField step_pair(const ChargeField& field, const LatticeSpec& spec, const AlphaField& alpha,
                      bool alpha_at_arrival) {
  check_field(field, spec);
  ChargeField out = field;
  envelope_step(field.phi[0], field.phi[1], out.phi[0], out.phi[1], alpha, +1.0,
                alpha_at_arrival);
  envelope_step(field.phi[2], field.phi[3], out.phi[2], out.phi[3], alpha, -1.0,
                alpha_at_arrival);
  out.t_index = field.t_index + 1;
  return out;
}

ChargeField renormalize(const ChargeField& field, int k_steps) {
  if (field.normalization == Normalization::Renormalized)
    throw ValidationError("renormalize: field is already renormalized");
  if (k_steps < 0) throw ValidationError("renormalize: k_steps must be >= 0");
  ChargeField out = field;
  scale_field(out, std::pow(std::sqrt(2.0), k_steps));
  out.normalization = Normalization::Renormalized;
  return out;
}

std::vector<ChargeField> stroboscope_evolve(const ChargeField& initial, const LatticeSpec& spec,
                                            const ScalingMode& mode, const Potential& v,
                                            int n_macro, bool alpha_at_arrival) {
  if (!std::holds_alternative<Diffusive>(mode))
    throw ValidationError("stroboscope_evolve: requires diffusive scaling");
  check_field(initial, spec);
  if (n_macro < 0) throw ValidationError("stroboscope_evolve: n_macro must be >= 0");
  const AlphaField alpha = AlphaField::from_potential(v, spec);

  std::vector<ChargeField> slices;
  slices.reserve(n_macro + 1);
  ChargeField state = initial;
  state.normalization = Normalization::Renormalized;
  slices.push_back(state);
  for (int macro = 0; macro < n_macro; ++macro) {
    for (int s = 0; s < 8; ++s) state = step_pair(state, spec, alpha, alpha_at_arrival);
    scale_field(state, 16.0);  // sqrt(2)^8
    slices.push_back(state);
  }
  return slices;
}

std::vector<ChargeField> evolve_fixed_velocity(const ChargeField& initial, const LatticeSpec& spec,
                                               const ScalingMode& mode, long n_steps,
                                               long emit_every) {
  const FixedVelocity* fv = std::get_if<FixedVelocity>(&mode);
  if (fv == nullptr)
    throw ValidationError("evolve_fixed_velocity: requires fixed-velocity scaling");
  check_field(initial, spec);
  if (n_steps < 0) throw ValidationError("evolve_fixed_velocity: n_steps must be >= 0");
  if (emit_every < 1) emit_every = 1;
  const double a_eps = fv->a * spec.epsilon;
  if (!(a_eps >= 0.0 && a_eps < 1.0))
    throw ValidationError("evolve_fixed_velocity: a*epsilon must lie in [0, 1)");
  const AlphaField alpha = AlphaField::constant(a_eps, spec.n_sites);
  const double gauge = std::exp(a_eps);

  std::vector<ChargeField> slices;
  ChargeField state = initial;
  state.normalization = Normalization::Renormalized;
  slices.push_back(state);
  for (long s = 1; s <= n_steps; ++s) {
    state = step_pair(state, spec, alpha);
    scale_field(state, gauge);
    if (s % emit_every == 0 || s == n_steps) slices.push_back(state);
  }
  return slices;
}

}  // namespace entwine
