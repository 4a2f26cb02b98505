#include "entwine/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "entwine/errors.hpp"

namespace entwine {

double l2_error(std::span<const double> a, std::span<const double> b, double delta) {
  if (a.size() != b.size()) throw ValidationError("l2_error: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(delta * acc);
}

double l2_error(const ComplexWave& a, const ComplexWave& b, double delta) {
  if (a.n_sites() != b.n_sites()) throw ValidationError("l2_error: shape mismatch");
  double acc = 0.0;
  for (int i = 0; i < a.n_sites(); ++i) acc += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(delta * acc);
}

double l2_error(const ChargeField& a, const ChargeField& b, double delta) {
  if (a.n_sites() != b.n_sites()) throw ValidationError("l2_error: shape mismatch");
  double acc = 0.0;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < a.n_sites(); ++i) {
      const double d = a.phi[c][i] - b.phi[c][i];
      acc += d * d;
    }
  return std::sqrt(delta * acc);
}

double linf_error(const ComplexWave& a, const ComplexWave& b) {
  if (a.n_sites() != b.n_sites()) throw ValidationError("linf_error: shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.n_sites(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

Complex norm_product(const ComplexWave& psi_l, const ComplexWave& psi_r, double delta) {
  if (psi_l.n_sites() != psi_r.n_sites()) throw ValidationError("norm_product: shape mismatch");
  Complex acc(0.0, 0.0);
  for (int i = 0; i < psi_l.n_sites(); ++i) acc += psi_l.values[i] * psi_r.values[i];
  return delta * acc;
}

ConvergenceReport empirical_order(std::span<const double> deltas, std::span<const double> errors) {
  if (deltas.size() != errors.size() || deltas.size() < 2)
    throw ValidationError("empirical_order: need >= 2 (delta, error) pairs of equal length");
  for (std::size_t j = 0; j + 1 < deltas.size(); ++j) {
    const double ratio = deltas[j] / deltas[j + 1];
    if (std::abs(ratio - 2.0) > 1e-9 * 2.0)
      throw ValidationError("empirical_order: deltas must halve at each step");
  }
  ConvergenceReport rep;
  rep.deltas.assign(deltas.begin(), deltas.end());
  rep.errors.assign(errors.begin(), errors.end());
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < errors.size(); ++j) {
    const double p = std::log2(errors[j] / errors[j + 1]);
    rep.orders.push_back(p);
    acc += p;
    if (!(p > 0.0)) rep.converged = false;  // flags "no convergence"
  }
  rep.summary_order = acc / rep.orders.size();
  return rep;
}

ComparisonReport compare_ensemble(const EnsembleStats& stats,
                                  std::span<const ChargeField> reference,
                                  const LatticeSpec& spec) {
  const TallyWindow& w = stats.window();
  if (reference.size() < static_cast<std::size_t>(w.n_slices))
    throw ValidationError("compare_ensemble: reference has fewer slices than the tally window");
  // the window must map into the reference grid without wrapping
  const std::int64_t lo = spec.origin_site() + w.z_min;
  const std::int64_t hi = lo + w.n_sites - 1;
  if (lo < 0 || hi >= spec.n_sites)
    throw ValidationError("compare_ensemble: tally window exceeds the reference grid");

  ComparisonReport rep;
  long within3 = 0, within5 = 0;
  for (int t = 0; t < w.n_slices; ++t) {
    const ChargeField& ref = reference[t];
    for (int j = 0; j < w.n_sites; ++j) {
      const int site = static_cast<int>(lo) + j;
      for (int dir = 0; dir < 2; ++dir)
        for (int env = 0; env < 2; ++env) {
          const double ref_value = ref.phi[env * 2 + dir][site];
          if (stats.hits(t, j, dir, env) == 0) {
            if (ref_value == 0.0) ++rep.excluded_zero;
            continue;  // unoccupied
          }
          const double se = stats.std_error(t, j, dir, env);
          const double diff = std::abs(stats.mean(t, j, dir, env) - ref_value);
          const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : HUGE_VAL);
          ++rep.bins_compared;
          if (z <= 3.0) ++within3;
          if (z <= 5.0) ++within5;
          if (z > rep.worst_z) {
            rep.worst_z = z;
            rep.worst_t = t;
            rep.worst_site = j;
            rep.worst_dir = dir;
            rep.worst_env = env;
          }
        }
    }
  }
  if (rep.bins_compared > 0) {
    rep.frac_within_3se = static_cast<double>(within3) / rep.bins_compared;
    rep.frac_within_5se = static_cast<double>(within5) / rep.bins_compared;
  }
  return rep;
}

std::vector<std::int64_t> charge_slice_sums(const EntwinedPath& path, LegSelection legs) {
  std::vector<std::int64_t> sums(path.t_stop + 1, 0);
  if (legs != LegSelection::ReturnOnly)
    for (std::size_t t = 0; t < path.forward_z.size(); ++t) sums[t] += 1;
  if (legs != LegSelection::ForwardOnly)
    for (std::size_t t = 0; t < path.return_z.size(); ++t) sums[t] -= 1;
  return sums;
}

}  // namespace entwine
