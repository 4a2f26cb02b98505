#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entwine/errors.hpp"
#include "entwine/lattice.hpp"
#include "entwine/rng.hpp"

namespace entwine {

struct WalkerParams {
  std::int64_t t_r_steps = 8;       // requested return time, in steps
  std::int64_t max_steps = 1000000; // cap before declaring a non-terminating sample
  // Turnaround picks the first marker with t >= t_r_steps; set this to demand
  // a strictly later marker instead.
  bool turnaround_strictly_after = false;
};

/// A closed space-time loop: a stochastic forward leg from the origin, the
/// markers dropped along it, and the deterministic return leg threaded back
/// through the markers. Positions are lattice offsets from the origin, one
/// entry per time slice 0..t_stop.
struct EntwinedPath {
  std::vector<std::int64_t> forward_z;
  std::vector<std::int64_t> return_z;
  std::vector<std::int64_t> marker_t;  // increasing; the last one is the turnaround
  std::int64_t t_r_steps = 0;
  std::int64_t t_stop = 0;
};

/// One envelope edge: departs (z_from, t) moving dz = +-1, carrying signed
/// charge +-1.
struct EnvelopeEdge {
  std::int64_t z_from = 0;
  int dz = 0;
  int charge = 0;
};

/// The same loop re-partitioned into two forward-in-time paths. Edge t of
/// each envelope departs time slice t.
struct Envelopes {
  std::vector<EnvelopeEdge> left, right;
};

namespace detail {

/// Forward leg of the stutter process. The first step is deterministic
/// (toward +z); from the second step on, each step draws one indication with
/// probability alpha(departure site). Indications alternate between reversing
/// the direction of travel and dropping a marker at the departure point,
/// starting with a reversal. The leg ends at the first marker at or beyond
/// t_r_steps (strictly beyond, if requested).
template <class Stream>
void build_forward_leg(Stream& stream, const AlphaField& alpha, const WalkerParams& params,
                       std::vector<std::int64_t>& forward_z, std::vector<std::int64_t>& marker_t) {
  if (params.t_r_steps < 2)
    throw ValidationError("generate_entwined_pair: t_r_steps must be >= 2");
  forward_z.clear();
  marker_t.clear();
  forward_z.push_back(0);
  forward_z.push_back(1);
  int dir = +1;
  bool next_is_reversal = true;
  std::int64_t t = 1;
  while (true) {
    if (stream.next_double() < alpha.at_offset(forward_z[t])) {
      if (next_is_reversal) {
        dir = -dir;
        next_is_reversal = false;
      } else {
        marker_t.push_back(t);
        const bool stop =
            params.turnaround_strictly_after ? t > params.t_r_steps : t >= params.t_r_steps;
        if (stop) return;  // leg ends at the turnaround marker
        next_is_reversal = true;
      }
    }
    forward_z.push_back(forward_z[t] + dir);
    ++t;
    if (t >= params.max_steps)
      throw NumericalError("generate_entwined_pair: no turnaround marker within " +
                           std::to_string(params.max_steps) + " steps");
  }
}

void build_return_leg(EntwinedPath& path);

}  // namespace detail

template <class Stream>
EntwinedPath generate_entwined_pair(Stream& stream, const AlphaField& alpha,
                                    const WalkerParams& params) {
  EntwinedPath path;
  path.t_r_steps = params.t_r_steps;
  detail::build_forward_leg(stream, alpha, params, path.forward_z, path.marker_t);
  path.t_stop = path.marker_t.back();
  path.forward_z.resize(path.t_stop + 1);
  detail::build_return_leg(path);
  return path;
}

/// Split the loop into its left and right envelopes. Edge charges carry the
/// direction of traversal: +1 on the forward leg, -1 on the return leg.
Envelopes envelope_decomposition(const EntwinedPath& path);

/// Recolour the envelope geometry from scratch by the corner rule alone: the
/// left envelope starts at -1 and flips sign at every left-hand corner
/// (+z step followed by a -z step), the right envelope starts at +1 and flips
/// at every right-hand corner. For a valid entwined pair this reproduces the
/// traversal charges exactly.
Envelopes recolour_by_corner_rule(const Envelopes& env);

/// Observation window for ensemble tallies: time slices [0, n_slices), sites
/// z_min .. z_min + n_sites - 1 in lattice offsets from the origin.
struct TallyWindow {
  int n_slices = 0;
  int n_sites = 0;
  std::int64_t z_min = 0;

  bool operator==(const TallyWindow&) const = default;
};

/// Mergeable per-bin tallies of signed charge deposits. Bins are keyed by
/// (time slice, departure site, direction of travel, envelope); sums and hit
/// counts are integers, so merging is exact and order-independent.
class EnsembleStats {
 public:
  EnsembleStats(const TallyWindow& window, std::uint64_t master_seed);

  const TallyWindow& window() const { return window_; }
  std::uint64_t master_seed() const { return master_seed_; }
  long n_walkers() const { return n_walkers_; }
  std::int64_t overflow_hits() const { return overflow_hits_; }

  // dir: 0 = toward -z, 1 = toward +z; env: 0 = left, 1 = right
  std::size_t bin_index(int t, int site, int dir, int env) const;
  std::int64_t sum(int t, int site, int dir, int env) const { return sum_[bin_index(t, site, dir, env)]; }
  std::int64_t hits(int t, int site, int dir, int env) const { return hits_[bin_index(t, site, dir, env)]; }
  double mean(int t, int site, int dir, int env) const;
  double std_error(int t, int site, int dir, int env) const;
  std::size_t n_bins() const { return sum_.size(); }

  void merge(const EnsembleStats& other);

  friend void deposit_charge(const EntwinedPath& path, EnsembleStats& tally);

 private:
  void add_edge(int t, std::int64_t z_from, int dz, int charge, int env);

  TallyWindow window_;
  std::uint64_t master_seed_ = 0;
  long n_walkers_ = 0;
  std::int64_t overflow_hits_ = 0;
  std::vector<std::int64_t> sum_;
  std::vector<std::int64_t> hits_;
};

/// Deposit one path into the tally via its envelope representation and count
/// it as one walker.
void deposit_charge(const EntwinedPath& path, EnsembleStats& tally);

/// Generate and deposit n_walkers paths, walker i drawing from the child
/// stream (master_seed, i). Work is split across n_threads; integer tallies
/// merged in walker order make the result identical for any thread count.
EnsembleStats run_ensemble(std::uint64_t master_seed, long n_walkers, const AlphaField& alpha,
                           const WalkerParams& params, const TallyWindow& window,
                           int n_threads = 1);

/// Exact expected signed-charge fields for slices 0..t_max by exhaustive
/// enumeration of both envelope walks (2^(t_max+1) branches). Envelope
/// positions wrap onto the periodic window of `spec`, so the result matches
/// the periodic stencil iteration bin for bin.
std::vector<ChargeField> enumerate_exact(const LatticeSpec& spec, const AlphaField& alpha,
                                         int t_max);

}  // namespace entwine
