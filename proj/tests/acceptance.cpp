// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails.  Each criterion is self-contained and prints its key measurement.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "twoflux/diagnostics.hpp"
#include "twoflux/scenarios.hpp"
#include "twoflux/semigroup.hpp"
#include "twoflux/viscous.hpp"

using namespace twoflux;

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

double interior_max(const Profile& p) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t lo = p.topology == Topology::line ? 1 : 0;
  std::size_t hi = p.topology == Topology::line ? p.values.size() - 1 : p.values.size();
  for (std::size_t i = lo; i < hi; ++i) m = std::max(m, p.values[i]);
  return m;
}

// ---- 1: closed-form linear decay and exact extinction --------------------

Criterion criterion1() {
  Criterion c;
  SmoothFluxPair pair = make_flux_pair("constant_gap");
  Profile p = scenarios::square_wave(Topology::line, 0.0, 1.0, 1.0);
  std::vector<double> times;
  for (int k = 1; k <= 100; ++k) times.push_back(double(k) / 101.0);
  SemigroupRun r = run(10, p, pair, 1.0 + 1e-9, times);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k)
    worst = std::max(worst, std::abs(interior_max(r.samples[std::size_t(k)]) - (1.0 - times[std::size_t(k)])));
  if (worst > 1e-10) c.fail("plateau deviates from 1-t by " + std::to_string(worst));
  const Profile& fin = r.final_profile();
  if (fin.l1() != 0.0) c.fail("profile not identically zero at t=1+1e-9");
  c.detail = "max |plateau-(1-t)| = " + std::to_string(worst);
  return c;
}

// ---- 2: periodic averaging ------------------------------------------------

Criterion criterion2() {
  Criterion c;
  SmoothFluxPair pair = make_flux_pair("constant_gap");
  Profile p = scenarios::square_wave(Topology::periodic, 0.0, 0.5, 1.0);
  std::vector<double> times = {0.25, 0.3, 0.5, 1.0, 1.5};
  SemigroupRun r = run(10, p, pair, 1.5, times);
  double worst = 0.0;
  for (const auto& s : r.samples) {
    for (double v : s.values) worst = std::max(worst, std::abs(v - 0.5));
    if (!s.breakpoints.empty()) worst = std::max(worst, s.total_variation());
  }
  if (worst > 1e-8) c.fail("not constant 0.5 after averaging, deviation " + std::to_string(worst));
  c.detail = "max deviation from mean = " + std::to_string(worst);
  return c;
}

// ---- 3-7: randomized corpus -----------------------------------------------

struct CorpusResult {
  Criterion c3, c4, c5, c6, c7;
  double c3_seconds = 0.0;  // the 50 contraction pairs (criterion 3's own workload)
};

CorpusResult corpus() {
  CorpusResult out;
  SmoothFluxPair pair = make_flux_pair("burgers_shifted");
  std::vector<double> times;
  for (int k = 1; k <= 20; ++k) times.push_back(double(k) / 20.0);
  std::mt19937_64 rng(424242);
  double worst_contr = std::numeric_limits<double>::infinity();
  double worst_mono = std::numeric_limits<double>::infinity();
  double worst_plateau = std::numeric_limits<double>::infinity();
  std::size_t max_fronts = 0;
  long max_restarts = 0;

  for (int trial = 0; trial < 50; ++trial) {
    int n_jumps = 4 + int(rng() % 17);  // <= 20 jumps
    Profile u0 = scenarios::random_piecewise(1000 + 3 * std::uint64_t(trial), n_jumps, 1.0);
    Profile v0 = scenarios::random_piecewise(1001 + 3 * std::uint64_t(trial), n_jumps, 1.0);
    auto t0 = std::chrono::steady_clock::now();
    SemigroupRun ru = run(8, u0, pair, 1.0, times);
    SemigroupRun rv = run(8, v0, pair, 1.0, times);

    // 3: L1 contraction at every sample time
    double d0 = l1_distance(ru.initial, rv.initial);
    for (std::size_t i = 0; i < ru.samples.size(); ++i) {
      double m = d0 + 1e-8 - l1_distance(ru.samples[i], rv.samples[i]);
      worst_contr = std::min(worst_contr, m);
      if (m < 0.0) out.c3.fail("contraction violated in trial " + std::to_string(trial));
    }
    out.c3_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // 4: comparison principle on an ordered pair w0 = u0 + nonnegative steps
    Profile w0 = ru.initial;
    for (double& v : w0.values) v += double(rng() % 26) * std::ldexp(1.0, -8);
    SemigroupRun rw = run(8, w0, pair, 1.0, times);
    for (std::size_t i = 0; i < ru.samples.size(); ++i)
      if (!profile_le(ru.samples[i], rw.samples[i], 1e-10, 1e-12))
        out.c4.fail("ordering lost in trial " + std::to_string(trial));

    // 5-7 over all three runs of this trial
    for (const SemigroupRun* r : {&ru, &rv, &rw}) {
      double tv = r->initial.total_variation(), li = r->initial.linf();
      for (const auto& d : r->diagnostics) {
        worst_mono = std::min(worst_mono, tv - d.tv);
        worst_mono = std::min(worst_mono, li - d.linf);
        tv = d.tv;
        li = d.linf;
      }
      double bound = 2.0 * double(r->initial_extremum_count) +
                     256.0 * r->initial.total_variation();
      max_fronts = std::max(max_fronts, r->stats.max_front_count);
      max_restarts = std::max(max_restarts, r->stats.total_restarts());
      if (double(r->stats.max_front_count) > bound)
        out.c6.fail("front bound exceeded in trial " + std::to_string(trial));
      PlateauBoundResult pb = plateau_bound_check(r->diagnostics, r->initial_min_plateau_width,
                                                  r->lambda_dagger, r->initial.linf(), pair.c0);
      if (std::isfinite(pb.worst_margin)) worst_plateau = std::min(worst_plateau, pb.worst_margin);
      if (!pb.pass) out.c7.fail("plateau bound violated in trial " + std::to_string(trial));
    }
  }
  if (worst_mono < -1e-10) out.c5.fail("TV/Linf monotonicity margin " + std::to_string(worst_mono));
  if (max_restarts > 100000) out.c6.fail("restart count " + std::to_string(max_restarts));
  if (out.c3.pass) out.c3.detail = "worst contraction margin = " + std::to_string(worst_contr);
  if (out.c4.pass) out.c4.detail = "ordering preserved in 50 ordered pairs";
  if (out.c5.pass) out.c5.detail = "worst monotonicity margin = " + std::to_string(worst_mono);
  if (out.c6.pass)
    out.c6.detail = "max fronts = " + std::to_string(max_fronts) +
                    ", max restarts = " + std::to_string(max_restarts);
  if (out.c7.pass) out.c7.detail = "worst plateau margin = " + std::to_string(worst_plateau);
  return out;
}

// ---- 8: nu-refinement ladder ----------------------------------------------

Criterion criterion8() {
  Criterion c;
  SmoothFluxPair pair = make_flux_pair("burgers_shifted");
  Profile p = scenarios::random_piecewise(1, 12, 1.0);
  LadderReport rep = nu_ladder(p, pair, 0.5, {4, 6, 8, 10});
  double d4 = rep.entries[0].distance, d6 = rep.entries[1].distance, d8 = rep.entries[2].distance;
  if (!(d4 > d6 && d6 > d8 && d8 > 0.0)) c.fail("d_nu not strictly decreasing");
  double ratio = d4 / d6;
  if (ratio < 1.5 || ratio > 10.0) c.fail("d4/d6 = " + std::to_string(ratio) + " outside [1.5,10]");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "d4=%.3e d6=%.3e d8=%.3e d4/d6=%.2f", d4, d6, d8, ratio);
  c.detail = buf;
  return c;
}

// ---- 9 + 10: vanishing-viscosity ladder, conservation, max principle -------

struct ViscousResult {
  Criterion c9, c10;
};

ViscousResult viscous_ladder() {
  ViscousResult out;
  SmoothFluxPair pair = make_flux_pair("constant_gap");
  Profile p = scenarios::square_wave(Topology::periodic, 0.25, 0.75, 1.0, -1.0);
  double T = 0.5;
  SemigroupRun r = run(10, p, pair, T, {});
  const Profile& target = r.final_profile();

  std::vector<std::pair<double, double>> ladder = {{0.2, 0.02}, {0.1, 0.01}, {0.05, 0.005}};
  std::vector<double> dists;
  double worst_mean = 0.0, worst_range = -std::numeric_limits<double>::infinity();
  for (auto [eps, delta] : ladder) {
    ViscousField fld(1024, r.initial, pair, eps, delta);
    double m0 = fld.mean();
    double lo = fld.min_value(), hi = fld.max_value();
    fld.solve_to(T, {});
    dists.push_back(l1_distance(fld, target));
    worst_mean = std::max(worst_mean,
                          std::abs(fld.mean() - m0) / std::max(1.0, std::abs(m0)));
    worst_range = std::max(worst_range, lo - fld.min_value());
    worst_range = std::max(worst_range, fld.max_value() - hi);
  }
  if (!(dists[1] < dists[0] && dists[2] < dists[1]))
    out.c9.fail("ladder distances not strictly decreasing");
  if (!(dists[2] < 0.5 * dists[0])) out.c9.fail("final distance not below half the first");
  if (worst_mean > 1e-13) out.c10.fail("mean drift " + std::to_string(worst_mean));
  if (worst_range > 1e-12) out.c10.fail("max principle violated by " + std::to_string(worst_range));
  char buf[160];
  std::snprintf(buf, sizeof(buf), "d=[%.3e, %.3e, %.3e]", dists[0], dists[1], dists[2]);
  out.c9.detail = buf;
  std::snprintf(buf, sizeof(buf), "mean drift %.2e, range excess %.2e", worst_mean, worst_range);
  out.c10.detail = buf;
  return out;
}

// ---- 11: weak-solution residual --------------------------------------------

Criterion criterion11() {
  Criterion c;
  SmoothFluxPair pair = make_flux_pair("constant_gap");
  Profile p = scenarios::square_wave(Topology::line, 0.0, 1.0, 1.0);
  std::mt19937_64 rng(7);
  auto unit = [&rng] { return double(rng() >> 11) * 0x1p-53; };
  std::vector<TestBump> bumps;
  for (int i = 0; i < 10; ++i) {
    double tc = 0.15 + 0.7 * unit();
    double rt = std::min(0.05 + 0.1 * unit(), 0.9 * std::min(tc, 1.0 - tc));
    bumps.push_back({tc, rt, -0.3 + 1.6 * unit(), 0.05 + 0.25 * unit()});
  }
  std::vector<double> res = weak_residual(10, p, pair, 1.0, bumps, 10000);
  double worst = 0.0;
  for (double v : res) worst = std::max(worst, std::abs(v));
  if (worst > 1e-6) c.fail("residual " + std::to_string(worst));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max |residual| = %.3e over 10 bumps", worst);
  c.detail = buf;
  return c;
}

// ---- 12: plateau regrowth discriminator ------------------------------------

Criterion criterion12() {
  Criterion c;
  SmoothFluxPair pair = make_flux_pair("burgers_shifted", {{"amp", 2.0}});
  Profile p = scenarios::example_exponential(5.0, 200);
  SemigroupRun r = run(10, p, pair, 0.5, {0.25});
  auto top_width = [](const Profile& s) {
    double vmax = -1e300;
    for (std::size_t i = 1; i + 1 < s.values.size(); ++i) vmax = std::max(vmax, s.values[i]);
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < s.breakpoints.size(); ++i)
      if (s.values[i + 1] >= vmax - 1e-12) w = std::max(w, s.breakpoints[i + 1] - s.breakpoints[i]);
    return w;
  };
  double w1 = top_width(r.samples[0]);
  double w2 = top_width(r.samples[1]);
  double slope = (w2 - w1) / 0.25;
  // affine growth with positive slope, unlike the entropy Burgers solution
  // whose maximum is attained at a single point (zero plateau width)
  if (!(w1 > 0.0 && w2 > w1)) c.fail("top plateau not growing");
  if (!(slope > 0.01)) c.fail("slope " + std::to_string(slope) + " <= 0.01");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "width(0.25)=%.4f width(0.5)=%.4f slope=%.3f", w1, w2, slope);
  c.detail = buf;
  return c;
}

// ---- 13: envelope oracle equivalence ----------------------------------------

Criterion criterion13() {
  Criterion c;
  std::mt19937_64 rng(31337);
  int done = 0;
  for (int trial = 0; done < 1000; ++trial) {
    PiecewiseAffineFlux flux = oracle::random_polygonal(rng, 12);
    double lo = flux.u_lo(), hi = flux.u_hi();
    double a = lo + (hi - lo) * double(rng() >> 11) * 0x1p-53;
    double b = lo + (hi - lo) * double(rng() >> 11) * 0x1p-53;
    if (a == b) continue;
    double u_l = std::min(a, b), u_r = std::max(a, b);
    auto fast_l = lower_convex_envelope(flux, u_l, u_r);
    auto slow_l = oracle::lower_envelope(flux, u_l, u_r);
    auto fast_u = upper_concave_envelope(flux, u_r, u_l);
    auto slow_u = oracle::upper_envelope(flux, u_r, u_l);
    auto same = [](const std::vector<EnvelopeSegment>& x, const std::vector<EnvelopeSegment>& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k].u_from != y[k].u_from || x[k].u_to != y[k].u_to || x[k].speed != y[k].speed)
          return false;
      return true;
    };
    if (!same(fast_l, slow_l) || !same(fast_u, slow_u)) {
      c.fail("mismatch at trial " + std::to_string(trial));
      break;
    }
    ++done;
  }
  c.detail = std::to_string(done) + " random fluxes matched exactly";
  return c;
}

int report(int idx, const Criterion& c, double seconds) {
  std::printf("criterion %2d: %s  (%.2fs)  %s\n", idx, c.pass ? "PASS" : "FAIL", seconds,
              c.detail.c_str());
  return c.pass ? 0 : 1;
}

template <typename F>
std::pair<Criterion, double> timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c = f();
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {c, s};
}

}  // namespace

int main() {
  int failures = 0;

  {
    auto [c, s] = timed(criterion1);
    failures += report(1, c, s);
  }
  {
    auto [c, s] = timed(criterion2);
    failures += report(2, c, s);
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    CorpusResult cr = corpus();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += report(3, cr.c3, cr.c3_seconds);
    failures += report(4, cr.c4, s - cr.c3_seconds);
    failures += report(5, cr.c5, 0.0);
    failures += report(6, cr.c6, 0.0);
    failures += report(7, cr.c7, 0.0);
  }
  {
    auto [c, s] = timed(criterion8);
    failures += report(8, c, s);
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    ViscousResult vr = viscous_ladder();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += report(9, vr.c9, s);
    failures += report(10, vr.c10, 0.0);
  }
  {
    auto [c, s] = timed(criterion11);
    failures += report(11, c, s);
  }
  {
    auto [c, s] = timed(criterion12);
    failures += report(12, c, s);
  }
  {
    auto [c, s] = timed(criterion13);
    failures += report(13, c, s);
  }

  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all 13 criteria passed\n");
  return failures == 0 ? 0 : 1;
}
