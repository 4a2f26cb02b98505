#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "entwine/errors.hpp"

namespace entwine {

enum class Boundary { Periodic, Unbounded };

/// Space-time lattice geometry. Sites live at z = (i - n_sites/2) * delta, so
/// a point source "at the origin" sits on the central site.
struct LatticeSpec {
  double delta = 0.0;    // lattice spacing
  double epsilon = 0.0;  // time step
  int n_sites = 0;
  Boundary boundary = Boundary::Periodic;

  int origin_site() const { return n_sites / 2; }
  double site_z(int i) const { return (i - n_sites / 2) * delta; }
  double length() const { return n_sites * delta; }
  /// Periodic site index for an unbounded lattice offset from the origin.
  int site_of_offset(std::int64_t dz) const {
    std::int64_t i = (origin_site() + dz) % n_sites;
    if (i < 0) i += n_sites;
    return static_cast<int>(i);
  }
};

/// Diffusive regime: epsilon = delta^2 / (2 D), hopping speed grows as the
/// lattice refines.
struct Diffusive {
  double D = 0.0;
};

/// Fixed-velocity regime: delta = c * epsilon, reversal probability a*epsilon
/// per step.
struct FixedVelocity {
  double c = 0.0;  // hopping speed, fixed in the continuum limit
  double a = 0.0;  // inverse mean free time
};

using ScalingMode = std::variant<Diffusive, FixedVelocity>;

/// hbar, m, c with the derived scattering rate a = m c^2 / hbar and Compton
/// length hbar / (m c). In this model the Compton length coincides with the
/// mean free path c / a.
struct PhysicalConstants {
  double hbar = 1.0;
  double m = 1.0;
  double c = 1.0;

  double rate_a() const { return m * c * c / hbar; }
  double mean_free_time() const { return 1.0 / rate_a(); }
  double mean_free_path() const { return c / rate_a(); }
};

/// Reversal/continue probabilities for one step. Always alpha + beta == 1
/// exactly and 0 < alpha < 1; `saturated` reports that the requested v*eps was
/// extreme enough that alpha had to be clamped into the open interval.
struct StepProbabilities {
  double alpha = 0.5;
  double beta = 0.5;
  bool saturated = false;
};

struct Potential {
  std::vector<double> values;  // one energy sample per site
  std::string descriptor;
};

/// Built-in potential shapes. Cosine is v0*cos(2*pi*periods*i/n) with phase
/// zero at site 0; barrier/well put +/-v0 on the middle third of the domain.
struct PotentialSpec {
  enum class Kind { Zero, Cosine, Barrier, Well };
  Kind kind = Kind::Zero;
  double v0 = 0.0;
  int periods = 1;
  double bound = 1e6;  // validation bound on max |v|
};

enum class Normalization { Raw, Renormalized };

/// Four signed charge densities on one time slice. phi[0],phi[1] are the left
/// envelope (charge departing each site in the -z / +z direction), phi[2],
/// phi[3] the right envelope.
struct ChargeField {
  std::array<std::vector<double>, 4> phi;
  long t_index = 0;
  Normalization normalization = Normalization::Raw;

  int n_sites() const { return static_cast<int>(phi[0].size()); }

  static ChargeField zeros(int n_sites);
  /// The slice-0 state of an entwined pair launched at the origin: the left
  /// envelope departs toward -z carrying charge -1 (it starts on the return
  /// leg), the right envelope departs toward +z carrying +1.
  static ChargeField point_source(const LatticeSpec& spec);
};

/// Per-site reversal probabilities used by the stencil kernels and the
/// walker. Holds one alpha per lattice site; unbounded walker coordinates are
/// wrapped onto the periodic window.
class AlphaField {
 public:
  static AlphaField constant(double alpha, int n_sites);
  static AlphaField from_potential(const Potential& v, const LatticeSpec& spec);

  double at(int site) const { return values_[site]; }
  double at_offset(std::int64_t dz) const { return values_[spec_index(dz)]; }
  int n_sites() const { return static_cast<int>(values_.size()); }
  bool is_uniform() const { return uniform_; }

 private:
  AlphaField(std::vector<double> values, int origin, bool uniform)
      : values_(std::move(values)), origin_(origin), uniform_(uniform) {}
  int spec_index(std::int64_t dz) const {
    std::int64_t n = static_cast<std::int64_t>(values_.size());
    std::int64_t i = (origin_ + dz) % n;
    if (i < 0) i += n;
    return static_cast<int>(i);
  }
  std::vector<double> values_;
  int origin_ = 0;
  bool uniform_ = false;
};

/// Diffusive lattice: epsilon = delta^2/(2D). Throws ValidationError for
/// non-positive inputs.
std::pair<LatticeSpec, ScalingMode> make_diffusive_spec(double delta, double D, int n_sites);

/// Fixed-velocity lattice: delta = c*epsilon, alpha = a*epsilon. Throws
/// ValidationError if a*epsilon is not a valid probability.
std::pair<LatticeSpec, ScalingMode> make_fixed_velocity_spec(double epsilon, double c, double a,
                                                             int n_sites);

/// Reversal probability alpha = e^{v eps} / (e^{-v eps} + e^{v eps}),
/// evaluated in the overflow-free logistic form 1/(1 + e^{-2 v eps}). For
/// |v*eps| beyond ~19 the result saturates against the ends of (0,1); it is
/// then clamped to the nearest representable interior value and flagged.
StepProbabilities reversal_probability(double v, double epsilon);

Potential sample_potential(const PotentialSpec& desc, const LatticeSpec& spec);

/// Compton length hbar/(m c) = c/a. Throws ValidationError for m <= 0.
double compton_scale(const PhysicalConstants& pc);

}  // namespace entwine
