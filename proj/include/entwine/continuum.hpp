#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "entwine/lattice.hpp"

namespace entwine {

using Complex = std::complex<double>;

/// Complex amplitude over the periodic grid.
struct ComplexWave {
  enum class Role { Psi, PsiPlus, PsiMinus, Chi };
  std::vector<Complex> values;
  double t = 0.0;
  Role role = Role::Psi;

  int n_sites() const { return static_cast<int>(values.size()); }
};

/// psi = phi2 + i*phi1. The packed wave approximately obeys
/// i dpsi/dt = (-D d^2/dz^2 + v) psi under diffusive scaling.
ComplexWave pack_complex(const ChargeField& field, double t = 0.0);

/// Exact inverse of pack_complex: phi1 = Im psi, phi2 = Re psi (phi3, phi4
/// cleared).
ChargeField unpack_complex(const ComplexWave& wave);

/// Crank-Nicolson integrator for i dpsi/dt = (-D d^2/dz^2 + v(z)) psi on the
/// periodic grid, using the standard second-difference Laplacian and a cyclic
/// tridiagonal solve (rank-one correction of the Thomas factorization). The
/// scheme is a Cayley transform of the Hermitian discrete Hamiltonian, so it
/// conserves the discrete norm to roundoff.
class CrankNicolson {
 public:
  CrankNicolson(const LatticeSpec& spec, double D, const Potential& v, double dt);

  void step(ComplexWave& psi) const;
  double dt() const { return dt_; }

 private:
  int n_;
  double dt_;
  std::vector<Complex> diag_;  // diagonal of I + i dt/2 H
  Complex off_;                // off-diagonal entry (also the periodic corners)
  std::vector<Complex> h_diag_;
  double h_off_;
};

/// Closed-form solution of i dpsi/dt = -D d^2 psi/dz^2 for a Gaussian packet
/// exp(-z^2/(4 sigma0^2) + i k0 z), evaluated pointwise.
Complex analytic_free_gaussian(double sigma0, double k0, double D, double z, double t);

/// d/dt of the transport-scattering pair computed spectrally:
///   dphi1/dt =  c dphi1/dz - a phi2
///   dphi2/dt = -c dphi2/dz + a phi1
/// With `unentwined` both scattering terms take the + sign, the sign pattern
/// obtained when paths are counted without the return leg.
std::pair<std::vector<double>, std::vector<double>> dirac_rhs(const ChargeField& field,
                                                              const LatticeSpec& spec, double c,
                                                              double a, bool unentwined = false);

/// Exact evolution of the transport-scattering pair by time t: per spatial
/// mode the 2x2 generator has trace zero and determinant c^2 k^2 + a^2, so
/// its exponential is cos(w t) I + sin(w t)/w A in closed form. Real fields
/// map to real fields; the entwined sign pattern keeps every mode oscillatory
/// while the unentwined variant grows hyperbolically for |k| c < a.
/// phi3/phi4 are carried through unchanged. If max_imag_residue is given it
/// receives the largest imaginary part discarded when the result is read
/// back as a real field; it is roundoff-sized for real input resolvable on
/// the grid. On an even-sized grid the lone Nyquist mode has no conjugate
/// partner, so energy there picks up an O(amplitude) residue unless the
/// phase c k t lands on a grid shift; use an odd n_sites (or band-limited
/// data) when exact realness matters.
ChargeField spectral_dirac_evolve(const ChargeField& field, const LatticeSpec& spec, double c,
                                  double a, double t, bool unentwined = false,
                                  double* max_imag_residue = nullptr);

/// Change of variables psi_pm = (i phi1 +- phi2) e^{+i a t}. Along solutions
/// of the transport-scattering pair these obey
///   dpsi_plus/dt  = c dpsi_minus/dz
///   dpsi_minus/dt = c dpsi_plus/dz + 2 i a psi_minus.
/// `printed_variant` selects the e^{-i a t} gauge instead (diagnostic; it
/// does not satisfy the pair above).
std::pair<ComplexWave, ComplexWave> to_psi_pm(const ChargeField& field, double a, double t,
                                              bool printed_variant = false);

struct DispersionQuery {
  double k = 0.0;
  double c = 1.0;
  double hbar = 1.0;
  double m = 1.0;
};

struct DispersionRoots {
  double omega_low = 0.0;   // -> hbar k^2 / (2 m) as c -> infinity
  double omega_high = 0.0;  // the companion branch, omega ~ -2 m c^2 / hbar
};

/// Real roots of omega = (hbar / 2m) (k^2 - omega^2 / c^2).
DispersionRoots modified_schrodinger_dispersion(const DispersionQuery& q);

/// Relative residual of (omega + m c^2)^2 = c^2 k^2 + m^2 c^4 (hbar = 1
/// units); both dispersion roots satisfy it identically.
double kg_consistency(double omega, const DispersionQuery& q);

}  // namespace entwine
