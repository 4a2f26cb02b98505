#include "entwine/walker.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

namespace entwine {

namespace detail {

void build_return_leg(EntwinedPath& path) {
  const std::int64_t T = path.t_stop;
  path.return_z.assign(T + 1, 0);
  // osculation points: the origin acts as the terminal marker
  std::int64_t t0 = 0, z0 = 0;
  for (std::size_t k = 0; k < path.marker_t.size(); ++k) {
    const std::int64_t t1 = path.marker_t[k];
    const std::int64_t z1 = path.forward_z[t1];
    // between consecutive markers the return leg is the forward sub-path
    // reflected through the segment midpoint, closing a rhombus
    for (std::int64_t t = t0; t <= t1; ++t)
      path.return_z[t] = z0 + z1 - path.forward_z[t0 + t1 - t];
    t0 = t1;
    z0 = z1;
  }
}

}  // namespace detail

Envelopes envelope_decomposition(const EntwinedPath& path) {
  Envelopes env;
  const std::int64_t T = path.t_stop;
  env.left.reserve(T);
  env.right.reserve(T);
  for (std::int64_t t = 0; t < T; ++t) {
    const EnvelopeEdge fwd{path.forward_z[t],
                           static_cast<int>(path.forward_z[t + 1] - path.forward_z[t]), +1};
    const EnvelopeEdge ret{path.return_z[t],
                           static_cast<int>(path.return_z[t + 1] - path.return_z[t]), -1};
    // the legs only touch at markers, so between markers one of them is
    // strictly to the left; compare edge midpoints
    const std::int64_t fmid = path.forward_z[t] + path.forward_z[t + 1];
    const std::int64_t rmid = path.return_z[t] + path.return_z[t + 1];
    if (fmid < rmid) {
      env.left.push_back(fwd);
      env.right.push_back(ret);
    } else {
      env.left.push_back(ret);
      env.right.push_back(fwd);
    }
  }
  return env;
}

Envelopes recolour_by_corner_rule(const Envelopes& env) {
  Envelopes out = env;
  int colour = -1;
  for (std::size_t t = 0; t < out.left.size(); ++t) {
    if (t > 0 && out.left[t - 1].dz == +1 && out.left[t].dz == -1) colour = -colour;
    out.left[t].charge = colour;
  }
  colour = +1;
  for (std::size_t t = 0; t < out.right.size(); ++t) {
    if (t > 0 && out.right[t - 1].dz == -1 && out.right[t].dz == +1) colour = -colour;
    out.right[t].charge = colour;
  }
  return out;
}

EnsembleStats::EnsembleStats(const TallyWindow& window, std::uint64_t master_seed)
    : window_(window), master_seed_(master_seed) {
  if (window.n_slices <= 0 || window.n_sites <= 0)
    throw ValidationError("EnsembleStats: window must have positive extent");
  const std::size_t n =
      static_cast<std::size_t>(window.n_slices) * window.n_sites * 2 * 2;
  sum_.assign(n, 0);
  hits_.assign(n, 0);
}

std::size_t EnsembleStats::bin_index(int t, int site, int dir, int env) const {
  return ((static_cast<std::size_t>(t) * window_.n_sites + site) * 2 + dir) * 2 + env;
}

double EnsembleStats::mean(int t, int site, int dir, int env) const {
  return n_walkers_ > 0 ? static_cast<double>(sum(t, site, dir, env)) / n_walkers_ : 0.0;
}

double EnsembleStats::std_error(int t, int site, int dir, int env) const {
  const long n = n_walkers_;
  if (n < 2) return 0.0;
  const double s = static_cast<double>(sum(t, site, dir, env));
  const double h = static_cast<double>(hits(t, site, dir, env));
  const double var = (h - s * s / n) / (n - 1);
  return var > 0.0 ? std::sqrt(var / n) : 0.0;
}

void EnsembleStats::merge(const EnsembleStats& other) {
  if (!(other.window_ == window_))
    throw ValidationError("EnsembleStats::merge: tally windows differ");
  n_walkers_ += other.n_walkers_;
  overflow_hits_ += other.overflow_hits_;
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    sum_[i] += other.sum_[i];
    hits_[i] += other.hits_[i];
  }
}

void EnsembleStats::add_edge(int t, std::int64_t z_from, int dz, int charge, int env) {
  const std::int64_t site = z_from - window_.z_min;
  if (site < 0 || site >= window_.n_sites) {
    ++overflow_hits_;
    return;
  }
  const int dir = dz < 0 ? 0 : 1;
  const std::size_t i = bin_index(t, static_cast<int>(site), dir, env);
  sum_[i] += charge;
  hits_[i] += 1;
}

void deposit_charge(const EntwinedPath& path, EnsembleStats& tally) {
  const Envelopes env = envelope_decomposition(path);
  const int T = static_cast<int>(std::min<std::int64_t>(path.t_stop, tally.window_.n_slices));
  for (int t = 0; t < T; ++t) {
    tally.add_edge(t, env.left[t].z_from, env.left[t].dz, env.left[t].charge, 0);
    tally.add_edge(t, env.right[t].z_from, env.right[t].dz, env.right[t].charge, 1);
  }
  ++tally.n_walkers_;
}

EnsembleStats run_ensemble(std::uint64_t master_seed, long n_walkers, const AlphaField& alpha,
                           const WalkerParams& params, const TallyWindow& window, int n_threads) {
  if (n_walkers < 1) throw ValidationError("run_ensemble: n_walkers must be >= 1");
  if (n_threads < 1) n_threads = 1;

  auto run_range = [&](long begin, long end, EnsembleStats& local) {
    for (long w = begin; w < end; ++w) {
      PhiloxStream stream = PhiloxStream::child(master_seed, static_cast<std::uint64_t>(w));
      try {
        const EntwinedPath path = generate_entwined_pair(stream, alpha, params);
        deposit_charge(path, local);
      } catch (const NumericalError& e) {
        throw NumericalError("walker " + std::to_string(w) + " (master seed " +
                             std::to_string(master_seed) + "): " + e.what());
      }
    }
  };

  if (n_threads == 1 || n_walkers < 2 * n_threads) {
    EnsembleStats stats(window, master_seed);
    run_range(0, n_walkers, stats);
    return stats;
  }

  const long chunk = (n_walkers + n_threads - 1) / n_threads;
  std::vector<EnsembleStats> partial;
  partial.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) partial.emplace_back(window, master_seed);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int i = 0; i < n_threads; ++i) {
    const long begin = i * chunk;
    const long end = std::min<long>(n_walkers, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, i, begin, end] {
      try {
        run_range(begin, end, partial[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  EnsembleStats stats(window, master_seed);
  for (const auto& p : partial) stats.merge(p);
  return stats;
}

namespace {

// depth-first sum over one envelope's direction decisions
void enumerate_envelope(const LatticeSpec& spec, const AlphaField& alpha, int t_max, int env,
                        std::int64_t z, int dir, int colour, double prob, int t,
                        std::vector<ChargeField>& fields) {
  const int component = env * 2 + (dir < 0 ? 0 : 1);
  fields[t].phi[component][spec.site_of_offset(z)] += prob * colour;
  if (t == t_max) return;
  // the next edge departs the arrival site z + dir; the decision weight is
  // evaluated at the current departure site, matching the stencil
  const double a = alpha.at_offset(z);
  enumerate_envelope(spec, alpha, t_max, env, z + dir, dir, colour, prob * (1.0 - a), t + 1,
                     fields);
  // corner; the colour flips on left-hand corners of the left envelope and
  // right-hand corners of the right envelope
  const bool flips = (env == 0) ? dir == +1 : dir == -1;
  enumerate_envelope(spec, alpha, t_max, env, z + dir, -dir, flips ? -colour : colour,
                     prob * a, t + 1, fields);
}

}  // namespace

std::vector<ChargeField> enumerate_exact(const LatticeSpec& spec, const AlphaField& alpha,
                                         int t_max) {
  constexpr int kMaxSteps = 24;
  if (t_max < 0) throw ValidationError("enumerate_exact: t_max must be >= 0");
  if (t_max > kMaxSteps)
    throw ValidationError("enumerate_exact: t_max = " + std::to_string(t_max) + " means ~2^" +
                          std::to_string(t_max + 2) + " branches; refusing above t_max = " +
                          std::to_string(kMaxSteps));
  std::vector<ChargeField> fields;
  fields.reserve(t_max + 1);
  for (int t = 0; t <= t_max; ++t) {
    ChargeField f = ChargeField::zeros(spec.n_sites);
    f.t_index = t;
    fields.push_back(std::move(f));
  }
  // the left envelope leaves the origin on the return leg, toward -z with
  // charge -1; the right envelope is the forward launch toward +z with +1
  enumerate_envelope(spec, alpha, t_max, 0, 0, -1, -1, 1.0, 0, fields);
  enumerate_envelope(spec, alpha, t_max, 1, 0, +1, +1, 1.0, 0, fields);
  return fields;
}

}  // namespace entwine
