#include "entwine/continuum.hpp"

#include <cmath>

#include "entwine/errors.hpp"

namespace entwine {

namespace {

using CVec = std::vector<Complex>;

// direct DFT; grids in this module stay small enough that O(n^2) is fine
CVec dft(const CVec& x, int sign) {
  const int n = static_cast<int>(x.size());
  CVec out(n, Complex(0.0, 0.0));
  const double w0 = sign * 2.0 * M_PI / n;
  for (int k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) acc += x[j] * std::polar(1.0, w0 * k * j);
    out[k] = acc;
  }
  return out;
}

CVec dft_forward(const CVec& x) { return dft(x, -1); }

CVec dft_inverse(const CVec& x) {
  CVec out = dft(x, +1);
  const double inv = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= inv;
  return out;
}

// signed wavenumber of DFT bin k on a grid of n sites and length L
double wavenumber(int k, int n, double L) {
  const int kk = k <= n / 2 ? k : k - n;
  return 2.0 * M_PI * kk / L;
}

// Thomas algorithm for a constant-off-diagonal tridiagonal system
void solve_tridiagonal(const CVec& diag, Complex off, const CVec& rhs, CVec& x, CVec& scratch) {
  const int n = static_cast<int>(diag.size());
  x.resize(n);
  scratch.resize(n);
  Complex pivot = diag[0];
  if (std::abs(pivot) == 0.0) throw NumericalError("CrankNicolson: zero pivot");
  x[0] = rhs[0] / pivot;
  for (int i = 1; i < n; ++i) {
    scratch[i] = off / pivot;
    pivot = diag[i] - off * scratch[i];
    if (std::abs(pivot) == 0.0) throw NumericalError("CrankNicolson: zero pivot");
    x[i] = (rhs[i] - off * x[i - 1]) / pivot;
  }
  for (int i = n - 2; i >= 0; --i) x[i] -= scratch[i + 1] * x[i + 1];
}

}  // namespace

ComplexWave pack_complex(const ChargeField& field, double t) {
  ComplexWave w;
  w.role = ComplexWave::Role::Psi;
  w.t = t;
  const int n = field.n_sites();
  w.values.resize(n);
  for (int i = 0; i < n; ++i) w.values[i] = Complex(field.phi[1][i], field.phi[0][i]);
  return w;
}

ChargeField unpack_complex(const ComplexWave& wave) {
  ChargeField f = ChargeField::zeros(wave.n_sites());
  for (int i = 0; i < wave.n_sites(); ++i) {
    f.phi[0][i] = wave.values[i].imag();
    f.phi[1][i] = wave.values[i].real();
  }
  return f;
}

CrankNicolson::CrankNicolson(const LatticeSpec& spec, double D, const Potential& v, double dt)
    : n_(spec.n_sites), dt_(dt) {
  if (!(dt > 0.0)) throw ValidationError("CrankNicolson: dt must be > 0");
  if (!(D > 0.0)) throw ValidationError("CrankNicolson: D must be > 0");
  if (static_cast<int>(v.values.size()) != n_)
    throw ValidationError("CrankNicolson: potential length does not match n_sites");
  const double inv_d2 = 1.0 / (spec.delta * spec.delta);
  h_off_ = -D * inv_d2;
  h_diag_.resize(n_);
  diag_.resize(n_);
  const Complex half_idt(0.0, 0.5 * dt);
  for (int i = 0; i < n_; ++i) {
    h_diag_[i] = Complex(2.0 * D * inv_d2 + v.values[i], 0.0);
    diag_[i] = 1.0 + half_idt * h_diag_[i];
  }
  off_ = half_idt * h_off_;
}

void CrankNicolson::step(ComplexWave& psi) const {
  if (psi.n_sites() != n_) throw ValidationError("CrankNicolson: wave length mismatch");
  const auto& in = psi.values;
  CVec rhs(n_);
  const Complex half_idt(0.0, 0.5 * dt_);
  for (int i = 0; i < n_; ++i) {
    const int ip = i + 1 == n_ ? 0 : i + 1;
    const int im = i == 0 ? n_ - 1 : i - 1;
    // (I - i dt/2 H) psi
    rhs[i] = (1.0 - half_idt * h_diag_[i]) * in[i] - half_idt * h_off_ * (in[ip] + in[im]);
  }

  // cyclic solve: fold the periodic corners in with a rank-one update
  const Complex gamma = -diag_[0];
  CVec mod_diag = diag_;
  mod_diag[0] -= gamma;
  mod_diag[n_ - 1] -= off_ * off_ / gamma;
  CVec y, q, scratch, u(n_, Complex(0.0, 0.0));
  solve_tridiagonal(mod_diag, off_, rhs, y, scratch);
  u[0] = gamma;
  u[n_ - 1] = off_;
  solve_tridiagonal(mod_diag, off_, u, q, scratch);
  const Complex numer = y[0] + y[n_ - 1] * off_ / gamma;
  const Complex denom = 1.0 + q[0] + q[n_ - 1] * off_ / gamma;
  if (std::abs(denom) == 0.0) throw NumericalError("CrankNicolson: singular cyclic correction");
  const Complex factor = numer / denom;
  for (int i = 0; i < n_; ++i) psi.values[i] = y[i] - factor * q[i];
  psi.t += dt_;
}

Complex analytic_free_gaussian(double sigma0, double k0, double D, double z, double t) {
  if (!(sigma0 > 0.0)) throw ValidationError("analytic_free_gaussian: sigma0 must be > 0");
  const Complex s(sigma0 * sigma0, D * t);
  const double zc = z - 2.0 * D * k0 * t;
  return std::sqrt(Complex(sigma0 * sigma0, 0.0) / s) *
         std::exp(-zc * zc / (4.0 * s) + Complex(0.0, k0 * z - D * k0 * k0 * t));
}

namespace {

// per-mode generator [[i k c, -s a], [s' a, -i k c]]; entwined: s = s' = 1,
// unentwined: both scattering terms positive
struct ModePair {
  Complex f1, f2;
};

ModePair evolve_mode(Complex f1, Complex f2, double kc, double a, double t, bool unentwined) {
  const Complex ikc(0.0, kc);
  const double det = kc * kc + (unentwined ? -a * a : a * a);
  Complex cos_wt, sinc_wt;  // cos(w t), sin(w t)/w with w = sqrt(det)
  if (det > 0.0) {
    const double w = std::sqrt(det);
    cos_wt = std::cos(w * t);
    sinc_wt = w == 0.0 ? Complex(t, 0.0) : Complex(std::sin(w * t) / w, 0.0);
  } else if (det < 0.0) {
    const double w = std::sqrt(-det);
    cos_wt = std::cosh(w * t);
    sinc_wt = Complex(std::sinh(w * t) / w, 0.0);
  } else {
    cos_wt = 1.0;
    sinc_wt = Complex(t, 0.0);
  }
  const double a12 = unentwined ? +a : -a;
  const double a21 = +a;
  ModePair out;
  out.f1 = cos_wt * f1 + sinc_wt * (ikc * f1 + a12 * f2);
  out.f2 = cos_wt * f2 + sinc_wt * (a21 * f1 - ikc * f2);
  return out;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> dirac_rhs(const ChargeField& field,
                                                              const LatticeSpec& spec, double c,
                                                              double a, bool unentwined) {
  const int n = field.n_sites();
  if (n != spec.n_sites) throw ValidationError("dirac_rhs: field length mismatch");
  CVec f1(n), f2(n);
  for (int i = 0; i < n; ++i) {
    f1[i] = field.phi[0][i];
    f2[i] = field.phi[1][i];
  }
  CVec F1 = dft_forward(f1), F2 = dft_forward(f2);
  const double s12 = unentwined ? +a : -a;
  for (int k = 0; k < n; ++k) {
    const Complex ikc(0.0, wavenumber(k, n, spec.length()) * c);
    const Complex g1 = ikc * F1[k] + s12 * F2[k];
    const Complex g2 = a * F1[k] - ikc * F2[k];
    F1[k] = g1;
    F2[k] = g2;
  }
  f1 = dft_inverse(F1);
  f2 = dft_inverse(F2);
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.resize(n);
  out.second.resize(n);
  for (int i = 0; i < n; ++i) {
    out.first[i] = f1[i].real();
    out.second[i] = f2[i].real();
  }
  return out;
}

ChargeField spectral_dirac_evolve(const ChargeField& field, const LatticeSpec& spec, double c,
                                  double a, double t, bool unentwined,
                                  double* max_imag_residue) {
  const int n = field.n_sites();
  if (n != spec.n_sites) throw ValidationError("spectral_dirac_evolve: field length mismatch");
  CVec f1(n), f2(n);
  for (int i = 0; i < n; ++i) {
    f1[i] = field.phi[0][i];
    f2[i] = field.phi[1][i];
  }
  CVec F1 = dft_forward(f1), F2 = dft_forward(f2);
  for (int k = 0; k < n; ++k) {
    const ModePair m =
        evolve_mode(F1[k], F2[k], wavenumber(k, n, spec.length()) * c, a, t, unentwined);
    F1[k] = m.f1;
    F2[k] = m.f2;
  }
  f1 = dft_inverse(F1);
  f2 = dft_inverse(F2);
  ChargeField out = field;
  double residue = 0.0;
  for (int i = 0; i < n; ++i) {
    out.phi[0][i] = f1[i].real();
    out.phi[1][i] = f2[i].real();
    residue = std::max({residue, std::abs(f1[i].imag()), std::abs(f2[i].imag())});
  }
  if (max_imag_residue != nullptr) *max_imag_residue = residue;
  return out;
}

std::pair<ComplexWave, ComplexWave> to_psi_pm(const ChargeField& field, double a, double t,
                                              bool printed_variant) {
  const Complex gauge = std::polar(1.0, printed_variant ? -a * t : +a * t);
  ComplexWave plus, minus;
  plus.role = ComplexWave::Role::PsiPlus;
  minus.role = ComplexWave::Role::PsiMinus;
  plus.t = minus.t = t;
  const int n = field.n_sites();
  plus.values.resize(n);
  minus.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const Complex ip1(0.0, field.phi[0][i]);
    plus.values[i] = (ip1 + field.phi[1][i]) * gauge;
    minus.values[i] = (ip1 - field.phi[1][i]) * gauge;
  }
  return {std::move(plus), std::move(minus)};
}

DispersionRoots modified_schrodinger_dispersion(const DispersionQuery& q) {
  if (!(q.m > 0.0) || !(q.c > 0.0))
    throw ValidationError("modified_schrodinger_dispersion: m and c must be > 0");
  // omega^2 + (2 m c^2 / hbar) omega - c^2 k^2 = 0
  const double mc2 = q.m * q.c * q.c / q.hbar;
  const double x = q.hbar * q.hbar * q.k * q.k / (q.m * q.m * q.c * q.c);
  const double root = std::sqrt(1.0 + x);
  DispersionRoots out;
  out.omega_low = mc2 * (x / (1.0 + root));  // sqrt(1+x) - 1, cancellation-free
  out.omega_high = -mc2 * (1.0 + root);
  return out;
}

double kg_consistency(double omega, const DispersionQuery& q) {
  const double mc2 = q.m * q.c * q.c;
  const double lhs = (omega + mc2) * (omega + mc2);
  const double rhs = q.c * q.c * q.k * q.k + mc2 * mc2;
  return std::abs(lhs - rhs) / rhs;
}

}  // namespace entwine
