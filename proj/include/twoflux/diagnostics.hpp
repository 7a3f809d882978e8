#ifndef TWOFLUX_DIAGNOSTICS_HPP_
#define TWOFLUX_DIAGNOSTICS_HPP_

// Norms, sign-interval mass decompositions, the plateau-width and
// front-count bound checks, weak-solution residuals, and per-run verdicts.
// Every verdict carries its measured margin, never just a boolean.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoflux/flux.hpp"
#include "twoflux/profile.hpp"
#include "twoflux/semigroup.hpp"
#include "twoflux/tracker.hpp"
#include "twoflux/viscous.hpp"

namespace twoflux {

/// Exact L1 distance between a viscous grid field and a piecewise-constant
/// profile: the profile is integrated exactly over each grid cell.
inline double l1_distance(const ViscousField& fld, const Profile& p) {
  if (p.topology != Topology::periodic)
    throw std::invalid_argument("l1_distance: viscous fields are periodic");
  double s = 0.0;
  double dx = fld.dx();
  for (int j = 0; j < fld.n_cells(); ++j) {
    double lo = double(j) * dx, hi = double(j + 1) * dx;
    std::vector<double> xs{lo};
    for (double b : p.breakpoints)
      if (b > lo && b < hi) xs.push_back(b);
    std::sort(xs.begin(), xs.end());
    xs.push_back(hi);
    double v = fld.values()[std::size_t(j)];
    for (std::size_t k = 0; k + 1 < xs.size(); ++k)
      s += std::abs(v - p(0.5 * (xs[k] + xs[k + 1]))) * (xs[k + 1] - xs[k]);
  }
  return s;
}

inline double l1_distance(const ViscousField& a, const ViscousField& b) {
  if (a.n_cells() != b.n_cells()) throw std::invalid_argument("l1_distance: grid mismatch");
  double s = 0.0;
  for (int j = 0; j < a.n_cells(); ++j)
    s += std::abs(a.values()[std::size_t(j)] - b.values()[std::size_t(j)]);
  return s * a.dx();
}

struct SignedInterval {
  double x_lo;
  double x_hi;
  int sign;     // +1 or -1
  double mass;  // signed
};

/// Partitions the support of a compactly supported line profile into
/// maximal intervals of constant sign, with exact masses.
inline std::vector<SignedInterval> sign_interval_masses(const Profile& p) {
  if (p.topology != Topology::line)
    throw std::invalid_argument("sign_interval_masses: line topology expected");
  std::vector<SignedInterval> out;
  // interior cells only; exterior cells carry no support
  for (std::size_t i = 0; i + 1 < p.breakpoints.size(); ++i) {
    double v = p.values[i + 1];
    int sgn = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    double lo = p.breakpoints[i], hi = p.breakpoints[i + 1];
    if (sgn == 0) continue;
    if (!out.empty() && out.back().sign == sgn && out.back().x_hi == lo) {
      out.back().x_hi = hi;
      out.back().mass += v * (hi - lo);
    } else {
      out.push_back({lo, hi, sgn, v * (hi - lo)});
    }
  }
  return out;
}

/// Lower bound on plateau widths: eqM1 keeps the initial width minus the
/// fastest possible endpoint approach; eqM2 gives linear regrowth after
/// t0 = l0 / (4 lambda).  With lambda = 0 the width can never shrink.
inline double plateau_width_bound(double t, double l0, double lambda, double M, double c0) {
  if (lambda <= 0.0) return l0;
  double b1 = l0 - 2.0 * lambda * t;
  double t0 = l0 / (4.0 * lambda);
  double b2 = 2.0 * lambda * (t - t0) / (std::expm1(4.0 * lambda * M / c0));
  return std::max(b1, b2);
}

struct PlateauBoundResult {
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();  // width - slack*bound
  double worst_time = 0.0;
};

/// Verifies min plateau width >= bound with multiplicative slack at every
/// sampled time that still has extrema.
inline PlateauBoundResult plateau_bound_check(const std::vector<SampleDiagnostics>& series,
                                              double l0, double lambda, double M, double c0,
                                              double slack = 1.0 - 1e-6) {
  PlateauBoundResult r;
  if (l0 <= 0.0) return r;  // no initial plateaus: nothing to bound
  for (const auto& d : series) {
    if (d.extremum_count == 0) continue;
    double bound = plateau_width_bound(d.time, l0, lambda, M, c0);
    double margin = d.min_plateau_width - slack * bound;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_time = d.time;
    }
    if (margin < 0.0) r.pass = false;
  }
  return r;
}

/// Sampling-error estimate between resolutions nu <= mu:
///   (||f_mu-f_nu||_W1inf + ||g_mu-g_nu||_W1inf) * TV
///   + (||f_mu-f_nu||_inf + ||g_mu-g_nu||_inf) * N
/// with norms taken over [-amp, amp] by dense sampling.
inline double flux_error_estimate(int nu, int mu, const SmoothFluxPair& pair, double tv, double n,
                                  double amp) {
  if (mu < nu) throw std::invalid_argument("flux_error_estimate: need mu >= nu");
  SampledFluxes fa = sample_flux_for_amplitude(pair, nu, amp);
  SampledFluxes fb = sample_flux_for_amplitude(pair, mu, amp);
  double lo = std::max(fa.f_nu.u_lo(), fb.f_nu.u_lo());
  double hi = std::min(fa.f_nu.u_hi(), fb.f_nu.u_hi());
  double sup = 0.0;
  int ns = 4001;
  for (int i = 0; i < ns; ++i) {
    double u = lo + (hi - lo) * double(i) / double(ns - 1);
    sup = std::max(sup, std::abs(fa.f_nu(u) - fb.f_nu(u)));
    sup = std::max(sup, std::abs(fa.g_nu(u) - fb.g_nu(u)));
  }
  double dsup = 0.0;
  double ha = fa.f_nu.grid_step(), hb = fb.f_nu.grid_step();
  for (std::int64_t j = fa.f_nu.j_min(); j < fa.f_nu.j_max(); ++j) {
    double um = fa.f_nu.node_u(j) + 0.5 * ha;
    if (um < lo || um > hi) continue;
    std::int64_t jb = fb.f_nu.cell_index(um);
    dsup = std::max(dsup, std::abs((fa.f_nu.node_value(j + 1) - fa.f_nu.node_value(j)) / ha -
                                   (fb.f_nu.node_value(jb + 1) - fb.f_nu.node_value(jb)) / hb));
    dsup = std::max(dsup, std::abs((fa.g_nu.node_value(j + 1) - fa.g_nu.node_value(j)) / ha -
                                   (fb.g_nu.node_value(jb + 1) - fb.g_nu.node_value(jb)) / hb));
  }
  return (sup + dsup) * tv + 2.0 * sup * n;
}

// ---- weak-solution residual ------------------------------------------

/// Standard mollifier bump: b(s) = exp(1/(s^2 - 1)) on |s| < 1.
inline double mollifier(double s) {
  double q = s * s - 1.0;
  if (q >= 0.0) return 0.0;
  return std::exp(1.0 / q);
}
inline double mollifier_prime(double s) {
  double q = s * s - 1.0;
  if (q >= 0.0) return 0.0;
  return std::exp(1.0 / q) * (-2.0 * s / (q * q));
}

/// Tensor test bump phi(t, x) = b((t-t_c)/r_t) * b((x-x_c)/r_x).
struct TestBump {
  double t_c, r_t, x_c, r_x;
};

namespace detail {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]
inline constexpr double kGL8Nodes[8] = {-0.9602898564975363, -0.7966664774136267,
                                        -0.5255324099163290, -0.1834346424956498,
                                        0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
inline constexpr double kGL8Weights[8] = {0.1012285362903763, 0.2223810344533745,
                                          0.3137066458778873, 0.3626837833783620,
                                          0.3626837833783620, 0.3137066458778873,
                                          0.2223810344533745, 0.1012285362903763};

// Spatial integrand integral for one bump at the tracker's current time:
//   I(t) = int u phi_t + [theta_nu f_nu(u) + (1 - theta_nu) g_nu(u)] phi_x dx
inline double space_integral(const Tracker& tr, const SampledFluxes& fx, const TestBump& b,
                             double t) {
  double st = (t - b.t_c) / b.r_t;
  if (std::abs(st) >= 1.0) return 0.0;
  double bt = mollifier(st);
  double bpt = mollifier_prime(st) / b.r_t;

  double x_lo = b.x_c - b.r_x, x_hi = b.x_c + b.r_x;
  std::vector<double> xs{x_lo, x_hi};
  for (double x : tr.spatial_nodes())
    if (x > x_lo && x < x_hi) xs.push_back(x);
  std::sort(xs.begin(), xs.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    double lo = xs[k], hi = xs[k + 1];
    if (hi - lo <= 0.0) continue;
    // chunk each smooth piece so the bump's steep tails are resolved
    int chunks = std::max(1, int(std::ceil((hi - lo) / (b.r_x / 16.0))));
    double clen = (hi - lo) / double(chunks);
    for (int c = 0; c < chunks; ++c) {
      double a0 = lo + c * clen, a1 = a0 + clen;
      double mid = 0.5 * (a0 + a1), half = 0.5 * (a1 - a0);
      for (int q = 0; q < 8; ++q) {
        double x = mid + half * kGL8Nodes[q];
        double sx = (x - b.x_c) / b.r_x;
        double phit = bpt * mollifier(sx);
        double phix = bt * mollifier_prime(sx) / b.r_x;
        double u = tr.value_at(x);
        double th = tr.interpolated_theta(x);
        double flux_hat = th * fx.f_nu(u) + (1.0 - th) * fx.g_nu(u);
        total += half * kGL8Weights[q] * (u * phit + flux_hat * phix);
      }
    }
  }
  return total;
}

}  // namespace detail

/// Residuals of the weak formulation for a list of test bumps, computed by
/// exact-in-x piecewise Gauss quadrature and composite Simpson in t with
/// panels aligned to the restart times (the integrand is piecewise smooth
/// between restarts).
inline std::vector<double> weak_residual(int nu, const Profile& initial,
                                         const SmoothFluxPair& pair, double T,
                                         const std::vector<TestBump>& tests,
                                         int time_points = 10000, TrackerOptions opt = {}) {
  Profile q = quantize_initial(initial, nu);
  double amp = std::max(initial.linf(), q.linf());
  double lambda = max_wave_speed(pair, amp);
  SampledFluxes fx = sample_flux_for_amplitude(pair, nu, amp);

  // first pass: collect restart times
  std::vector<double> breaks{0.0, T};
  {
    Tracker scout(q, fx, pair.c0, lambda, opt);
    scout.evolve_to(T);
    for (double t : scout.stats().restart_times)
      if (t > 0.0 && t < T) breaks.push_back(t);
  }
  for (const auto& b : tests) {
    if (b.t_c - b.r_t <= 0.0 || b.t_c + b.r_t >= T)
      throw std::invalid_argument("weak_residual: bump must be supported inside (0, T)");
    breaks.push_back(b.t_c - b.r_t);
    breaks.push_back(b.t_c + b.r_t);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  Tracker tr(q, fx, pair.c0, lambda, opt);
  std::vector<double> residuals(tests.size(), 0.0);
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    double t0 = breaks[s], t1 = breaks[s + 1];
    if (t1 - t0 <= 1e-14 * std::max(1.0, T)) continue;
    int panels = std::max(2, int(std::ceil((t1 - t0) / T * double(time_points) / 2.0)) * 2);
    double h = (t1 - t0) / double(panels);
    // composite Simpson over [t0, t1]
    for (int j = 0; j <= panels; ++j) {
      double t = (j == panels) ? t1 : t0 + double(j) * h;
      tr.evolve_to(t);
      double w = (j == 0 || j == panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      for (std::size_t k = 0; k < tests.size(); ++k)
        residuals[k] += w * (h / 3.0) * detail::space_integral(tr, fx, tests[k], t);
    }
  }
  return residuals;
}

// ---- per-run verdicts ---------------------------------------------------

struct InvariantVerdict {
  std::string name;
  bool pass = true;
  double margin = 0.0;  // >= 0 means pass with this much room
};

struct DiagnosticsReport {
  std::vector<SampleDiagnostics> series;
  std::vector<InvariantVerdict> verdicts;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
  const InvariantVerdict& verdict(const std::string& name) const {
    for (const auto& v : verdicts)
      if (v.name == name) return v;
    throw std::out_of_range("DiagnosticsReport: no verdict named " + name);
  }
};

/// Checks the monotonicity and bound invariants along one run:
/// TV/L-infinity (and L1 on the line) non-increasing, front count within
/// 2 N(0) + 2^nu TV(initial), plateau widths above the lower bound.
inline DiagnosticsReport check_run(const SemigroupRun& r, double mono_tol = 1e-9) {
  DiagnosticsReport rep;
  rep.series = r.diagnostics;

  auto mono = [&](const std::string& name, auto get, double v0) {
    InvariantVerdict v{name, true, std::numeric_limits<double>::infinity()};
    double prev = v0;
    for (const auto& d : r.diagnostics) {
      double cur = get(d);
      double margin = prev - cur + mono_tol;
      v.margin = std::min(v.margin, margin);
      if (margin < 0.0) v.pass = false;
      prev = cur;
    }
    return v;
  };
  rep.verdicts.push_back(
      mono("tv_monotone", [](const SampleDiagnostics& d) { return d.tv; },
           r.initial.total_variation()));
  rep.verdicts.push_back(mono("linf_monotone",
                              [](const SampleDiagnostics& d) { return d.linf; },
                              r.initial.linf()));
  if (r.initial.topology == Topology::line)
    rep.verdicts.push_back(
        mono("l1_monotone", [](const SampleDiagnostics& d) { return d.l1; }, r.initial.l1()));

  {
    InvariantVerdict v{"front_count_bound", true, 0.0};
    double bound = 2.0 * double(r.initial_extremum_count) +
                   std::ldexp(1.0, r.nu) * r.initial.total_variation();
    double worst = double(r.stats.max_front_count);
    v.margin = bound - worst;
    v.pass = v.margin >= 0.0;
    rep.verdicts.push_back(v);
  }
  {
    PlateauBoundResult pb =
        plateau_bound_check(r.diagnostics, r.initial_min_plateau_width, r.lambda_dagger,
                            r.initial.linf(), r.c0);
    rep.verdicts.push_back({"plateau_width_bound", pb.pass, pb.worst_margin});
  }
  return rep;
}

}  // namespace twoflux

#endif  // TWOFLUX_DIAGNOSTICS_HPP_
