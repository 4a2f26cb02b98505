#pragma once

#include <array>
#include <vector>

#include "entwine/lattice.hpp"

namespace entwine {

/// Constant-coefficient view of one envelope's update: 2x2 blocks applied to
/// the field shifted by +delta and -delta. For the left envelope the combined
/// action is ((beta, -alpha), (alpha, beta)) with the first column reading
/// from z+delta and the second from z-delta; the right envelope flips the
/// sign of the alpha entries.
struct EnvelopeStencil {
  std::array<std::array<double, 2>, 2> plus_shift{};   // applied to field(z + delta)
  std::array<std::array<double, 2>, 2> minus_shift{};  // applied to field(z - delta)

  static EnvelopeStencil left(const StepProbabilities& p) {
    return {{{{p.beta, 0.0}, {p.alpha, 0.0}}}, {{{0.0, -p.alpha}, {0.0, p.beta}}}};
  }
  static EnvelopeStencil right(const StepProbabilities& p) {
    return {{{{p.beta, 0.0}, {-p.alpha, 0.0}}}, {{{0.0, p.alpha}, {0.0, p.beta}}}};
  }
};

/// One step of the left-envelope difference equations on the periodic grid:
///   phi1(z) <- beta(z+d) phi1(z+d) - alpha(z-d) phi2(z-d)
///   phi2(z) <- beta(z-d) phi2(z-d) + alpha(z+d) phi1(z+d)
/// Reversal probabilities are evaluated at the departure site; pass
/// alpha_at_arrival to evaluate them at the arrival site instead (the two
/// differ at O(delta*epsilon)). phi3/phi4 are carried through unchanged.
ChargeField step_left(const ChargeField& field, const LatticeSpec& spec, const AlphaField& alpha,
                      bool alpha_at_arrival = false);

/// Right-envelope step: as step_left with the scattering signs swapped
/// (phi3 gains +alpha phi4, phi4 gains -alpha phi3). phi1/phi2 untouched.
ChargeField step_right(const ChargeField& field, const LatticeSpec& spec, const AlphaField& alpha,
                       bool alpha_at_arrival = false);

/// Both envelopes in one pass.
ChargeField step_pair(const ChargeField& field, const LatticeSpec& spec, const AlphaField& alpha,
                      bool alpha_at_arrival = false);

/// Undo the sqrt(2)-per-step decay of the raw densities: multiply all four
/// components by sqrt(2)^k_steps and mark the field Renormalized. Applying it
/// twice is an error.
ChargeField renormalize(const ChargeField& field, int k_steps);

/// Diffusive evolution observed only at multiples of 8 steps: each macro step
/// applies 8 micro steps and the 2^4 renormalization. Intermediate slices sit
/// in a rotating frame (the step matrix contains a pi/4 rotation that only
/// closes after 8 steps), so only the emitted macro slices are comparable to
/// the continuum solution. The returned sequence holds the initial slice
/// followed by one slice per macro step; the running state stays O(1) because
/// the growth factor is folded in every macro step.
std::vector<ChargeField> stroboscope_evolve(const ChargeField& initial, const LatticeSpec& spec,
                                            const ScalingMode& mode, const Potential& v,
                                            int n_macro, bool alpha_at_arrival = false);

/// Fixed-velocity evolution with constant alpha = a*epsilon for n_steps,
/// emitting every emit_every steps (plus the final slice). The raw update
/// damps every component at rate a on top of the transport-scattering
/// dynamics, so emitted slices carry the compensating e^{a t} normalization;
/// the normalized field is the one that stays oscillatory and O(1).
std::vector<ChargeField> evolve_fixed_velocity(const ChargeField& initial, const LatticeSpec& spec,
                                               const ScalingMode& mode, long n_steps,
                                               long emit_every = 1);

}  // namespace entwine
