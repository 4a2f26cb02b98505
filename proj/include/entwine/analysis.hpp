#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "entwine/continuum.hpp"
#include "entwine/lattice.hpp"
#include "entwine/walker.hpp"

namespace entwine {

/// Grid L2 distance sqrt(delta * sum |a - b|^2).
double l2_error(std::span<const double> a, std::span<const double> b, double delta);
double l2_error(const ComplexWave& a, const ComplexWave& b, double delta);
/// All four components pooled.
double l2_error(const ChargeField& a, const ChargeField& b, double delta);

double linf_error(const ComplexWave& a, const ComplexWave& b);

/// delta * sum psi_l * psi_r (no conjugation; pass the conjugate explicitly
/// to form the norm integral).
Complex norm_product(const ComplexWave& psi_l, const ComplexWave& psi_r, double delta);

struct ConvergenceReport {
  std::vector<double> deltas;  // strictly decreasing, halving
  std::vector<double> errors;
  std::vector<double> orders;  // log2(e_j / e_{j+1})
  double summary_order = 0.0;  // mean of pairwise orders
  bool converged = true;       // false if any pairwise order <= 0
};

/// Pairwise empirical orders for a halving sequence of spacings. Throws
/// ValidationError unless each delta is half the previous one (to 1e-9
/// relative).
ConvergenceReport empirical_order(std::span<const double> deltas, std::span<const double> errors);

struct ComparisonReport {
  long bins_compared = 0;       // occupied bins (at least one MC hit)
  long excluded_zero = 0;       // bins with zero variance and zero reference
  double frac_within_3se = 0.0;
  double frac_within_5se = 0.0;
  double worst_z = 0.0;
  int worst_t = -1, worst_site = -1, worst_dir = -1, worst_env = -1;
};

/// Per-bin z-scores of MC means against a deterministic reference sequence
/// (reference[t] compared to tally slice t; the tally window must sit inside
/// the reference grid).
ComparisonReport compare_ensemble(const EnsembleStats& stats,
                                  std::span<const ChargeField> reference,
                                  const LatticeSpec& spec);

enum class LegSelection { Both, ForwardOnly, ReturnOnly };

/// Net charge per time slice: +1 per forward-leg occupancy, -1 per
/// return-leg occupancy. All zeros for a valid entwined pair.
std::vector<std::int64_t> charge_slice_sums(const EntwinedPath& path,
                                            LegSelection legs = LegSelection::Both);

}  // namespace entwine
