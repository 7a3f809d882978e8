#ifndef TWOFLUX_SEMIGROUP_HPP_
#define TWOFLUX_SEMIGROUP_HPP_

// The user-facing semigroup S^nu_t: quantizes initial data onto the dyadic
// grid, runs the front tracker through a list of sample times, refines in
// nu, and reduces compactly supported line problems to periodic ones by
// wrapping onto a large rescaled period.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "twoflux/flux.hpp"
#include "twoflux/profile.hpp"
#include "twoflux/tracker.hpp"

namespace twoflux {

/// Truncates every cell value toward zero onto 2^-nu Z and merges the
/// resulting equal neighbours.  Truncation (not rounding) keeps the map
/// monotone and magnitude-non-increasing, so TV and L-infinity can only
/// shrink.
inline Profile quantize_initial(const Profile& p, int nu) {
  if (nu < 1) throw std::invalid_argument("quantize_initial: nu must be >= 1");
  double scale = std::ldexp(1.0, nu);
  Profile q = p;
  for (double& v : q.values) v = std::trunc(v * scale) / scale;
  q.merge_equal(0.0);
  return q;
}

struct SampleDiagnostics {
  double time = 0.0;
  double tv = 0.0;
  double linf = 0.0;
  double l1 = 0.0;
  std::size_t front_count = 0;
  std::size_t extremum_count = 0;
  double min_plateau_width = 0.0;
  long restarts = 0;
};

struct SemigroupRun {
  int nu = 0;
  Profile initial;           // quantized data actually evolved
  double horizon = 0.0;
  double c0 = 0.0;
  double lambda_dagger = 0.0;
  std::vector<double> sample_times;
  std::vector<Profile> samples;
  std::vector<SampleDiagnostics> diagnostics;
  TrackerStats stats;
  std::size_t initial_front_count = 0;
  std::size_t initial_extremum_count = 0;
  double initial_min_plateau_width = 0.0;  // 0 when no extrema

  const Profile& final_profile() const {
    if (samples.empty()) throw std::logic_error("SemigroupRun: no samples");
    return samples.back();
  }
};

/// Evolves the quantized data through every sample time, recording a
/// snapshot plus diagnostics at each.  If T itself is not among the sample
/// times it is appended.
inline SemigroupRun run(int nu, const Profile& p, const SmoothFluxPair& pair, double T,
                        std::vector<double> sample_times, TrackerOptions opt = {}) {
  if (T < 0.0) throw std::invalid_argument("run: negative horizon");
  std::sort(sample_times.begin(), sample_times.end());
  for (double t : sample_times)
    if (t < 0.0 || t > T) throw std::invalid_argument("run: sample time outside [0, T]");
  if (sample_times.empty() || sample_times.back() < T) sample_times.push_back(T);

  SemigroupRun out;
  out.nu = nu;
  out.initial = quantize_initial(p, nu);
  out.horizon = T;
  out.c0 = pair.c0;
  out.sample_times = sample_times;

  double amp = std::max(p.linf(), out.initial.linf());
  out.lambda_dagger = max_wave_speed(pair, amp);
  SampledFluxes fx = sample_flux_for_amplitude(pair, nu, amp);

  Tracker tracker(out.initial, fx, pair.c0, out.lambda_dagger, opt);
  out.initial_front_count = tracker.front_count();
  out.initial_extremum_count = tracker.extremum_count();
  double w0 = tracker.min_plateau_width();
  out.initial_min_plateau_width = std::isfinite(w0) ? w0 : 0.0;
  for (double t : sample_times) {
    tracker.evolve_to(t);
    Profile snap = tracker.snapshot();
    SampleDiagnostics d;
    d.time = t;
    d.tv = snap.total_variation();
    d.linf = snap.linf();
    d.l1 = snap.l1();
    d.front_count = tracker.front_count();
    d.extremum_count = tracker.extremum_count();
    double w = tracker.min_plateau_width();
    d.min_plateau_width = std::isfinite(w) ? w : 0.0;
    d.restarts = tracker.stats().total_restarts();
    out.samples.push_back(std::move(snap));
    out.diagnostics.push_back(d);
  }
  out.stats = tracker.stats();
  return out;
}

struct LadderEntry {
  int nu = 0;
  double distance = 0.0;        // L1 distance of S^nu_T p to S^nu_max_T p
  double apriori_bound = 0.0;   // O(1) * TV * 2^-nu * T, unit constant
  double flux_gap_estimate = 0.0;  // sampling-error estimate, see below
};

struct LadderReport {
  std::vector<LadderEntry> entries;  // one per nu except the finest
  std::vector<double> ratios;        // distance[k] / distance[k+1]
  int nu_max = 0;
};

/// Pairwise refinement study: evolves p at each resolution in `nus`
/// (increasing) and measures the L1 distance of each run's final profile to
/// the finest one.  Reports the a-priori first-order bound TV * 2^-nu * T
/// and a sampling-error estimate
///   (||f_mu - f_nu||_W1inf + ||g_mu - g_nu||_W1inf) * TV
/// computed by dense sampling over the data window.
inline LadderReport nu_ladder(const Profile& p, const SmoothFluxPair& pair, double T,
                              const std::vector<int>& nus) {
  if (nus.size() < 2) throw std::invalid_argument("nu_ladder: need at least two resolutions");
  if (!std::is_sorted(nus.begin(), nus.end()))
    throw std::invalid_argument("nu_ladder: nus must be increasing");

  std::vector<SemigroupRun> runs;
  runs.reserve(nus.size());
  for (int nu : nus) runs.push_back(run(nu, p, pair, T, {}));

  double amp = p.linf();
  double tv = quantize_initial(p, nus.back()).total_variation();

  LadderReport rep;
  rep.nu_max = nus.back();
  const Profile& finest = runs.back().final_profile();
  for (std::size_t k = 0; k + 1 < nus.size(); ++k) {
    LadderEntry e;
    e.nu = nus[k];
    e.distance = l1_distance(runs[k].final_profile(), finest);
    e.apriori_bound = tv * std::ldexp(1.0, -nus[k]) * T;
    // W^{1,inf} distance between the two polygonal samplings: sup of value
    // and slope differences on a dense grid over the window
    double sup = 0.0;
    SampledFluxes fa = sample_flux_for_amplitude(pair, nus[k], amp);
    SampledFluxes fb = sample_flux_for_amplitude(pair, nus.back(), amp);
    int n = 4001;
    double lo = std::max(fa.f_nu.u_lo(), fb.f_nu.u_lo());
    double hi = std::min(fa.f_nu.u_hi(), fb.f_nu.u_hi());
    for (int i = 0; i < n; ++i) {
      double u = lo + (hi - lo) * double(i) / double(n - 1);
      sup = std::max(sup, std::abs(fa.f_nu(u) - fb.f_nu(u)));
      sup = std::max(sup, std::abs(fa.g_nu(u) - fb.g_nu(u)));
    }
    // slope differences per coarse grid cell, compared midpoint-wise
    double dsup = 0.0;
    double h = fa.f_nu.grid_step(), hb = fb.f_nu.grid_step();
    for (std::int64_t j = fa.f_nu.j_min(); j < fa.f_nu.j_max(); ++j) {
      double sa_f = (fa.f_nu.node_value(j + 1) - fa.f_nu.node_value(j)) / h;
      double sa_g = (fa.g_nu.node_value(j + 1) - fa.g_nu.node_value(j)) / h;
      double um = fa.f_nu.node_u(j) + 0.5 * h;
      if (um < lo || um > hi) continue;
      std::int64_t jb = fb.f_nu.cell_index(um);
      double sb_f = (fb.f_nu.node_value(jb + 1) - fb.f_nu.node_value(jb)) / hb;
      double sb_g = (fb.g_nu.node_value(jb + 1) - fb.g_nu.node_value(jb)) / hb;
      dsup = std::max(dsup, std::abs(sa_f - sb_f));
      dsup = std::max(dsup, std::abs(sa_g - sb_g));
    }
    e.flux_gap_estimate = (sup + dsup) * tv;
    rep.entries.push_back(e);
  }
  for (std::size_t k = 0; k + 1 < rep.entries.size(); ++k) {
    double d1 = rep.entries[k + 1].distance;
    rep.ratios.push_back(d1 > 0.0 ? rep.entries[k].distance / d1
                                  : std::numeric_limits<double>::infinity());
  }
  return rep;
}

struct WrappedProblem {
  Profile periodic;   // unit-period data
  double period;      // p_len: one period corresponds to p_len in x
  double time_scale;  // line time t maps to periodic time t / period

  /// Maps a unit-period snapshot back to line coordinates on
  /// [-period/2, period/2].
  Profile unwrap(const Profile& snap) const {
    if (snap.topology != Topology::periodic)
      throw std::invalid_argument("WrappedProblem::unwrap: periodic snapshot expected");
    Profile out;
    out.topology = Topology::line;
    if (snap.breakpoints.empty()) {
      out.values = {snap.values[0]};
      return out;
    }
    // cells in order; the first value is the one holding before the first
    // breakpoint, i.e. the wrap cell
    out.values.push_back(snap.values.back());
    for (std::size_t i = 0; i < snap.breakpoints.size(); ++i) {
      out.breakpoints.push_back(snap.breakpoints[i] * period - 0.5 * period);
      out.values.push_back(snap.values[i]);
    }
    return out;
  }
};

/// Embeds a compactly supported line profile into one large period and
/// rescales to the unit cell.  With p_len >= 2R + T*lambda + margin no wave
/// can cross the seam before time T, so the periodic evolution (at rescaled
/// time t / p_len) agrees with the line evolution on the support.  The
/// space-time rescaling leaves the flux pair unchanged.
inline WrappedProblem wrap_line_to_periodic(const Profile& p, const SmoothFluxPair& pair, double T,
                                            double margin = 0.5) {
  if (p.topology != Topology::line)
    throw std::invalid_argument("wrap_line_to_periodic: line profile expected");
  if (p.values.front() != 0.0 || p.values.back() != 0.0)
    throw std::invalid_argument("wrap_line_to_periodic: profile must be compactly supported");
  double R = 0.0;
  for (double b : p.breakpoints) R = std::max(R, std::abs(b));
  double lambda = max_wave_speed(pair, p.linf());
  double p_len = std::max(2.0 * R + T * lambda + margin, margin);

  WrappedProblem w;
  w.period = p_len;
  w.time_scale = 1.0 / p_len;
  w.periodic.topology = Topology::periodic;
  if (p.breakpoints.empty()) {
    w.periodic.values = {0.0};
    return w;
  }
  // map x in [-p_len/2, p_len/2) to x/p_len + 1/2 in [0, 1)
  w.periodic.breakpoints.reserve(p.breakpoints.size());
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    w.periodic.breakpoints.push_back(p.breakpoints[i] / p_len + 0.5);
    w.periodic.values.push_back(p.values[i + 1]);
  }
  // the cell after the last breakpoint wraps around to before the first;
  // periodic convention stores the value holding *after* each breakpoint
  // (values[i] on [b[i], b[i+1])), so shift accordingly: value after b[i]
  // is p.values[i+1] -- already in place; the wrap cell carries
  // p.values.back() == 0 == p.values.front(), consistent by compact support.
  return w;
}

}  // namespace twoflux

#endif  // TWOFLUX_SEMIGROUP_HPP_
