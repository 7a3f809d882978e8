#ifndef TWOFLUX_TRACKER_HPP_
#define TWOFLUX_TRACKER_HPP_

// Event-driven front-tracking engine for the two-flux conservation law.
//
// Between restarts the solution is piecewise constant with fronts moving at
// constant Rankine-Hugoniot speeds, except on extremum plateaus, whose
// value obeys
//     u' = -(g_nu(u) - f_nu(u)) / width     (local max)
//     u' = +(g_nu(u) - f_nu(u)) / width     (local min)
// with the adjacent front speeds re-evaluated at the drifting value.  The
// engine advances this coupled system with RK4, localizes the four restart
// triggers (collision, jump vanishing, Liu admissibility loss, extrema
// merging) by bracketing and bisection, and restarts from a snapshot.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoflux/flux.hpp"
#include "twoflux/profile.hpp"
#include "twoflux/riemann.hpp"

namespace twoflux {

enum class EventKind { Collision, JumpVanishes, AdmissibilityLoss, ExtremaMerge };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Collision: return "collision";
    case EventKind::JumpVanishes: return "jump_vanishes";
    case EventKind::AdmissibilityLoss: return "admissibility_loss";
    case EventKind::ExtremaMerge: return "extrema_merge";
  }
  return "?";
}

struct Event {
  EventKind kind;
  double time;
  double location;  // x-position of the triggering front / pair
};

struct TrackerStats {
  long collisions = 0;
  long jump_vanishings = 0;
  long admissibility_losses = 0;
  long extrema_merges = 0;
  std::size_t max_front_count = 0;
  std::vector<double> restart_times;
  std::vector<Event> events;

  long total_restarts() const {
    return collisions + jump_vanishings + admissibility_losses + extrema_merges;
  }
  void count(EventKind k) {
    switch (k) {
      case EventKind::Collision: ++collisions; break;
      case EventKind::JumpVanishes: ++jump_vanishings; break;
      case EventKind::AdmissibilityLoss: ++admissibility_losses; break;
      case EventKind::ExtremaMerge: ++extrema_merges; break;
    }
  }
};

struct TrackerOptions {
  long restart_cap = 1000000;
  double event_rel_tol = 1e-12;
  // test hook: negate the first front's speed after every (re)init, used to
  // verify that the property suite detects a corrupted evolution
  bool debug_flip_first_speed = false;
};

class Tracker {
 public:
  Tracker(const Profile& initial, SampledFluxes fluxes, double c0, double lambda_dagger,
          TrackerOptions opt = {})
      : fx_(std::move(fluxes)), c0_(c0), lambda_(lambda_dagger), opt_(opt) {
    if (!(c0 > 0.0)) throw std::invalid_argument("Tracker: c0 must be positive");
    sigma_min_ = 1e-13 * std::max(1.0, initial.linf());
    gap_max_ = 0.0;
    for (std::int64_t j = fx_.f_nu.j_min(); j <= fx_.f_nu.j_max(); ++j)
      gap_max_ = std::max(gap_max_, fx_.g_nu.node_value(j) - fx_.f_nu.node_value(j));
    init_from_profile(initial);
  }

  double time() const { return time_; }
  Topology topology() const { return topo_; }
  double sigma_min() const { return sigma_min_; }
  std::size_t front_count() const { return pos_.size(); }
  const TrackerStats& stats() const { return stats_; }

  /// Number of extremum plateaus, N(t).
  std::size_t extremum_count() const {
    std::size_t n = 0;
    for (auto e : extremum_)
      if (e != 0) ++n;
    return n;
  }

  double min_plateau_width() const {
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cells_.size(); ++c)
      if (extremum_[c] != 0) w = std::min(w, plateau_width(c));
    return w;
  }

  /// Current position of front i.
  double front_position(std::size_t i) const {
    if (dynamic_[i]) return pos_[i];
    return pos_[i] + speed_[i] * (time_ - ref_time_);
  }

  std::vector<Front> fronts() const {
    std::vector<Front> out;
    out.reserve(pos_.size());
    for (std::size_t i = 0; i < pos_.size(); ++i) {
      auto [ul, ur] = front_states(i);
      out.push_back({front_position(i), speed_[i], ul, ur, family_[i]});
    }
    return out;
  }

  const std::vector<double>& cell_values() const { return cells_; }

  /// Piecewise-constant snapshot of the current state.  Coincident fronts
  /// are merged into single jumps and sub-sigma_min jumps dropped.
  Profile snapshot() const {
    const double w_tol = 1e-9;
    std::size_t m = pos_.size();
    if (topo_ == Topology::line) {
      Profile p;
      p.topology = Topology::line;
      p.values.push_back(cells_.front());
      for (std::size_t i = 0; i < m; ++i) {
        double x = front_position(i);
        double v = cells_[i + 1];
        if (!p.breakpoints.empty() && x - p.breakpoints.back() <= w_tol)
          p.values.back() = v;  // zero-width cell vanished at a collision
        else {
          p.breakpoints.push_back(x);
          p.values.push_back(v);
        }
      }
      p.merge_equal(sigma_min_);
      return p;
    }
    // periodic: drop zero-width cells first.  Coincidence is decided by
    // index adjacency (cell i lies between fronts i and i+1), not by sorted
    // positions: a colliding pair can be inverted by roundoff, and rotating
    // into position order would then split the cluster and merge the wrong
    // cell away.
    Profile p;
    p.topology = Topology::periodic;
    if (m == 0) {
      p.values = {cells_[0]};
      return p;
    }
    std::vector<char> drop(m, 0);
    bool all_dropped = true;
    std::size_t widest = 0;
    double widest_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      double g = front_position((i + 1) % m) - front_position(i);
      if (i + 1 == m) g += 1.0;
      if (g <= w_tol)
        drop[i] = 1;
      else
        all_dropped = false;
      if (g > widest_gap) {
        widest_gap = g;
        widest = i;
      }
    }
    if (all_dropped) {  // total collapse: constant state
      p.values = {cells_[widest]};
      return p;
    }
    // a cluster of coincident fronts {i..j} keeps front i's position and the
    // value to the right of front j
    std::vector<double> xs, vs;
    for (std::size_t i = 0; i < m; ++i) {
      if (drop[(i + m - 1) % m]) continue;  // interior of a cluster
      std::size_t e = i;
      while (drop[e]) e = (e + 1) % m;
      double x = front_position(i);
      x -= std::floor(x);
      if (x >= 1.0) x = 0.0;  // guard against rounding at the seam
      xs.push_back(x);
      vs.push_back(cells_[e]);
    }
    std::size_t rot = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (xs[i] < xs[rot]) rot = i;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      std::size_t i = (rot + k) % xs.size();
      p.breakpoints.push_back(xs[i]);
      p.values.push_back(vs[i]);
    }
    p.merge_equal(sigma_min_);
    return p;
  }

  /// The affine switch profile theta_nu(t, x): linear 1 -> 0 across a max
  /// plateau, 0 -> 1 across a min plateau, locally constant elsewhere.
  double interpolated_theta(double x) const {
    std::size_t c = locate_cell(x);
    if (extremum_[c] != 0) {
      auto [xl, xr] = plateau_span(c);
      if (topo_ == Topology::periodic) {
        // measure x relative to xl on the circle
        double rel = x - xl;
        rel -= std::floor(rel);
        double w = xr - xl;
        w -= std::floor(w);
        if (w == 0.0) w = 1.0;
        double frac = rel / w;
        return extremum_[c] > 0 ? 1.0 - frac : frac;
      }
      double frac = (x - xl) / (xr - xl);
      return extremum_[c] > 0 ? 1.0 - frac : frac;
    }
    return region_theta(c);
  }

  /// Pointwise state u(t, x).
  double value_at(double x) const { return cells_[locate_cell(x)]; }

  /// Sorted current front positions (quadrature panel boundaries).
  std::vector<double> spatial_nodes() const {
    std::vector<double> xs;
    xs.reserve(pos_.size());
    for (std::size_t i = 0; i < pos_.size(); ++i) xs.push_back(front_position(i));
    return xs;
  }

  /// Advances by dt assuming no event occurs inside (enforced by caller).
  void advance(double dt) {
    if (dt < 0.0) throw std::invalid_argument("Tracker::advance: negative dt");
    if (dt == 0.0) return;
    double target = time_ + dt;
    if (ext_cells_.empty()) {
      time_ = target;  // frozen fronts are lazy; nothing to integrate
      return;
    }
    while (time_ < target) {
      double h = std::min(substep_bound(), target - time_);
      h = std::max(h, 1e-14 * std::max(1.0, target));
      if (time_ + h > target) h = target - time_;
      rk4_step(h);
    }
    time_ = target;
  }

  /// Earliest restart trigger in (time, t_max], located on a scratch copy.
  std::optional<Event> next_event(double t_max) const {
    Tracker scratch(*this);
    return scratch.advance_until_event(t_max);
  }

  /// Restart at the current time: snapshot, merge, re-solve all Riemann
  /// problems, refresh plateau records.
  void apply_restart(const Event& e) {
    stats_.count(e.kind);
    stats_.restart_times.push_back(time_);
    stats_.events.push_back({e.kind, time_, e.location});
    Profile snap = snapshot();
    init_from_profile(snap);
  }

  /// Runs the event loop up to time T.
  void evolve_to(double T) {
    if (T < time_) throw std::invalid_argument("Tracker::evolve_to: T before current time");
    while (time_ < T) {
      auto e = advance_until_event(T);
      if (!e) break;
      if (stats_.total_restarts() >= opt_.restart_cap)
        throw std::runtime_error("Tracker: restart cap exceeded at t=" + std::to_string(time_) +
                                 " with " + std::to_string(front_count()) + " fronts");
      apply_restart(*e);
    }
  }

  /// In-place variant of next_event: advances to the event time (or t_max)
  /// and returns the trigger without applying the restart.
  std::optional<Event> advance_until_event(double t_max) {
    if (t_max <= time_) return std::nullopt;
    const double tol_t = opt_.event_rel_tol * std::max(1.0, t_max);

    // analytic collision time among frozen-frozen adjacent pairs
    double t_lin = std::numeric_limits<double>::infinity();
    std::size_t lin_idx = 0;
    std::size_t m = pos_.size();
    if (m >= 2) {
      std::size_t n_pairs = (topo_ == Topology::periodic) ? m : m - 1;
      for (std::size_t i = 0; i < n_pairs; ++i) {
        std::size_t j = (i + 1) % m;
        if (dynamic_[i] || dynamic_[j]) continue;
        double dv = speed_[i] - speed_[j];
        if (dv <= 0.0) continue;
        double gap = front_position(j) - front_position(i);
        if (j == 0) gap += 1.0;
        double tc = time_ + gap / dv;
        if (tc < t_lin) {
          t_lin = tc;
          lin_idx = i;
        }
      }
    }

    if (ext_cells_.empty()) {
      // purely linear flight
      if (t_lin <= t_max) {
        time_ = t_lin;
        return Event{EventKind::Collision, time_, front_position(lin_idx)};
      }
      time_ = t_max;
      return std::nullopt;
    }

    while (time_ < t_max) {
      double t_stop = std::min(t_max, t_lin);
      double h = std::min(substep_bound(), t_stop - time_);
      h = std::max(h, tol_t);
      if (time_ + h > t_stop) h = t_stop - time_;
      if (h <= 0.0) {
        if (t_lin <= t_max) return Event{EventKind::Collision, time_, front_position(lin_idx)};
        break;
      }

      Saved saved = save_state();
      rk4_step(h);
      auto cross = first_crossing();
      if (cross) {
        // bisect the step until the crossing is bracketed tightly in value
        double lo = 0.0, hi = h;
        for (int iter = 0; iter < 200; ++iter) {
          restore_state(saved);
          double mid = 0.5 * (lo + hi);
          // bisect on the monitor value; time is refined to machine
          // precision if needed, since e.g. the sigma_min band is far
          // narrower than any fixed time tolerance
          if (hi - lo <= 1e-16 * std::max(1.0, saved.time + hi) && iter > 0) {
            rk4_step(hi);
            cross = first_crossing();
            break;
          }
          rk4_step(mid);
          auto c2 = first_crossing();
          if (c2) {
            hi = mid;
            if (crossing_is_tight(*c2)) {
              cross = c2;
              break;
            }
          } else {
            lo = mid;
          }
        }
        if (!cross) {  // crossing evaporated at tolerance; land at hi
          restore_state(saved);
          rk4_step(hi);
          cross = first_crossing();
        }
        if (cross) return Event{cross->kind, time_, cross->location};
        continue;  // spurious bracket; keep stepping
      }
      if (time_ >= t_lin - 0.5 * tol_t && t_lin <= t_max) {
        time_ = t_lin;
        return Event{EventKind::Collision, time_, front_position(lin_idx)};
      }
    }
    time_ = t_max;
    return std::nullopt;
  }

 private:
  struct Crossing {
    EventKind kind;
    double location;
    double violation;  // how far past the threshold, >= 0
    double threshold_scale;
  };

  struct Saved {
    double time;
    std::vector<double> dyn_pos;
    std::vector<double> ext_vals;
  };

  // ---- indexing helpers -------------------------------------------------
  // line:     m fronts, m+1 cells; front i separates cell i | cell i+1.
  // periodic: m fronts, m cells; cell i lies to the right of front i;
  //           front i separates cell (i-1+m)%m | cell i.

  std::size_t left_cell(std::size_t i) const {
    if (topo_ == Topology::line) return i;
    return (i + cells_.size() - 1) % cells_.size();
  }
  std::size_t right_cell(std::size_t i) const {
    if (topo_ == Topology::line) return i + 1;
    return i;
  }
  std::pair<double, double> front_states(std::size_t i) const {
    return {cells_[left_cell(i)], cells_[right_cell(i)]};
  }
  // bounding fronts of plateau cell c
  std::pair<std::size_t, std::size_t> plateau_fronts(std::size_t c) const {
    if (topo_ == Topology::line) return {c - 1, c};
    return {c, (c + 1) % pos_.size()};
  }
  std::pair<double, double> plateau_span(std::size_t c) const {
    auto [l, r] = plateau_fronts(c);
    double xl = front_position(l), xr = front_position(r);
    if (topo_ == Topology::periodic && xr <= xl) xr += 1.0;
    return {xl, xr};
  }
  double plateau_width(std::size_t c) const {
    auto [xl, xr] = plateau_span(c);
    return xr - xl;
  }

  std::size_t locate_cell(double x) const {
    std::size_t m = pos_.size();
    if (m == 0) return 0;
    if (topo_ == Topology::line) {
      for (std::size_t i = 0; i < m; ++i)
        if (x < front_position(i)) return i;
      return m;
    }
    double xm = x - std::floor(x);
    // positions mod 1, cyclic walk
    std::size_t best = 0;
    double best_pos = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      double p = front_position(i);
      p -= std::floor(p);
      if (p <= xm && p > best_pos) {
        best_pos = p;
        best = i;
      }
    }
    if (best_pos < 0.0) {
      // x precedes every front: belongs to the cell of the last front
      double mx = -1.0;
      for (std::size_t i = 0; i < m; ++i) {
        double p = front_position(i);
        p -= std::floor(p);
        if (p > mx) {
          mx = p;
          best = i;
        }
      }
    }
    return best;  // periodic: cell `best` lies to the right of front `best`
  }

  double region_theta(std::size_t c) const {
    // constant extension: 0 right of a max / left of a min, 1 otherwise
    std::size_t n = cells_.size();
    if (topo_ == Topology::periodic) {
      for (std::size_t k = 1; k < n; ++k) {
        std::size_t j = (c + n - k) % n;
        if (extremum_[j] > 0) return 0.0;
        if (extremum_[j] < 0) return 1.0;
      }
      return 0.5;  // constant profile
    }
    for (std::size_t k = c; k-- > 0;) {
      if (extremum_[k] > 0) return 0.0;
      if (extremum_[k] < 0) return 1.0;
    }
    for (std::size_t k = c + 1; k < n; ++k) {
      if (extremum_[k] > 0) return 1.0;
      if (extremum_[k] < 0) return 0.0;
    }
    // monotone profile: by family of any front
    if (!family_.empty()) return family_[0] == FrontFamily::F ? 1.0 : 0.0;
    return 0.5;
  }

  // ---- dynamics ---------------------------------------------------------

  double rh_speed(std::size_t i) const {
    auto [ul, ur] = front_states(i);
    const PiecewiseAffineFlux& flux = (family_[i] == FrontFamily::F) ? fx_.f_nu : fx_.g_nu;
    double s;
    if (ul == ur) {
      // degenerate (only transiently, at an event boundary): one-sided slope
      double h = flux.grid_step();
      std::int64_t j = flux.cell_index(ul);
      s = (flux.node_value(j + 1) - flux.node_value(j)) / h;
    } else {
      s = (flux(ur) - flux(ul)) / (ur - ul);
    }
    if (opt_.debug_flip_first_speed && i == 0) s = -s;
    return s;
  }

  double substep_bound() const {
    double min_w = std::numeric_limits<double>::infinity();
    for (std::size_t c : ext_cells_) {
      double w = plateau_width(c);
      if (w <= 0.0)
        throw std::runtime_error("Tracker: plateau width non-positive at t=" +
                                 std::to_string(time_) + " (should be unreachable)");
      min_w = std::min(min_w, w);
    }
    double h = 0.05 * min_w / std::max(lambda_, 1.0);
    h = std::min(h, 0.01 * min_w / c0_);
    // conservative bound until the next monitored pair could collide
    double min_gap = min_monitored_gap();
    if (lambda_ > 0.0) h = std::min(h, std::max(min_gap, 0.0) / (2.0 * lambda_) + 1e-15);
    // keep plateau strengths from overshooting far below sigma_min
    double s_min = std::max(min_dynamic_strength(), 0.0);
    if (std::isfinite(s_min) && gap_max_ > 0.0)
      h = std::min(h, 0.25 * s_min * min_w / gap_max_ + 1e-15);
    return h;
  }

  double min_monitored_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (auto [i, j] : mon_pairs_) {
      // separating pairs cannot collide until their speeds flip; the step
      // bound on plateau dynamics keeps that flip resolved, and the
      // collision monitor catches it.  Without this, a coincident fan pair
      // drifting apart at roundoff speed freezes the stepper at gap zero.
      if (speed_[i] <= speed_[j]) continue;
      double gap = front_position(j) - front_position(i);
      if (j == 0) gap += 1.0;
      g = std::min(g, gap);
    }
    return g;
  }

  // Jump strength with the sign fixed by the adjacent plateau orientation:
  // positive while the extremum still sticks out, crossing zero exactly when
  // the plateau value reaches its neighbor.  (An absolute value would bounce
  // back positive after the crossing and let a substep skip the event.)
  double signed_strength(std::size_t i) const {
    std::size_t lc = left_cell(i), rc = right_cell(i);
    double ul = cells_[lc], ur = cells_[rc];
    if (extremum_[lc] > 0 || extremum_[rc] < 0) return ul - ur;
    return ur - ul;
  }

  double min_dynamic_strength() const {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t i : dyn_fronts_) s = std::min(s, signed_strength(i));
    return s;
  }

  void derivatives(std::vector<double>& dpos, std::vector<double>& dval) const {
    dval.resize(ext_cells_.size());
    for (std::size_t k = 0; k < ext_cells_.size(); ++k) {
      std::size_t c = ext_cells_[k];
      double w = plateau_width(c);
      double gap = fx_.g_nu(cells_[c]) - fx_.f_nu(cells_[c]);
      dval[k] = (extremum_[c] > 0 ? -gap : gap) / w;
    }
    dpos.resize(dyn_fronts_.size());
    for (std::size_t k = 0; k < dyn_fronts_.size(); ++k) dpos[k] = rh_speed(dyn_fronts_[k]);
  }

  void rk4_step(double h) {
    std::size_t np = dyn_fronts_.size(), nv = ext_cells_.size();
    std::vector<double> p0(np), v0(nv);
    for (std::size_t k = 0; k < np; ++k) p0[k] = pos_[dyn_fronts_[k]];
    for (std::size_t k = 0; k < nv; ++k) v0[k] = cells_[ext_cells_[k]];

    auto set_state = [&](const std::vector<double>& dp, const std::vector<double>& dv, double a) {
      for (std::size_t k = 0; k < np; ++k) pos_[dyn_fronts_[k]] = p0[k] + a * dp[k];
      for (std::size_t k = 0; k < nv; ++k) cells_[ext_cells_[k]] = v0[k] + a * dv[k];
    };

    double t0 = time_;
    std::vector<double> k1p, k1v, k2p, k2v, k3p, k3v, k4p, k4v;
    derivatives(k1p, k1v);
    time_ = t0 + 0.5 * h;
    set_state(k1p, k1v, 0.5 * h);
    derivatives(k2p, k2v);
    set_state(k2p, k2v, 0.5 * h);
    derivatives(k3p, k3v);
    time_ = t0 + h;
    set_state(k3p, k3v, h);
    derivatives(k4p, k4v);
    for (std::size_t k = 0; k < np; ++k)
      pos_[dyn_fronts_[k]] = p0[k] + h / 6.0 * (k1p[k] + 2.0 * k2p[k] + 2.0 * k3p[k] + k4p[k]);
    for (std::size_t k = 0; k < nv; ++k)
      cells_[ext_cells_[k]] = v0[k] + h / 6.0 * (k1v[k] + 2.0 * k2v[k] + 2.0 * k3v[k] + k4v[k]);
    time_ = t0 + h;
    // refresh cached speeds of dynamic fronts (monitors and output)
    for (std::size_t i : dyn_fronts_) speed_[i] = rh_speed(i);
  }

  Saved save_state() const {
    Saved s;
    s.time = time_;
    s.dyn_pos.reserve(dyn_fronts_.size());
    for (std::size_t i : dyn_fronts_) s.dyn_pos.push_back(pos_[i]);
    s.ext_vals.reserve(ext_cells_.size());
    for (std::size_t c : ext_cells_) s.ext_vals.push_back(cells_[c]);
    return s;
  }

  void restore_state(const Saved& s) {
    time_ = s.time;
    for (std::size_t k = 0; k < dyn_fronts_.size(); ++k) pos_[dyn_fronts_[k]] = s.dyn_pos[k];
    for (std::size_t k = 0; k < ext_cells_.size(); ++k) cells_[ext_cells_[k]] = s.ext_vals[k];
    for (std::size_t i : dyn_fronts_) speed_[i] = rh_speed(i);
  }

  // ---- event monitors ---------------------------------------------------

  std::optional<Crossing> first_crossing() const {
    std::optional<Crossing> best;
    auto offer = [&](Crossing c) {
      if (!best || c.violation / c.threshold_scale > best->violation / best->threshold_scale)
        best = c;
    };

    // (a) collision of pairs involving a dynamic front
    for (auto [i, j] : mon_pairs_) {
      double gap = front_position(j) - front_position(i);
      if (j == 0) gap += 1.0;
      if (gap <= 0.0 && speed_[i] > speed_[j])
        offer({EventKind::Collision, front_position(i), -gap, 1e-12});
    }
    for (std::size_t i : dyn_fronts_) {
      auto [ul, ur] = front_states(i);
      // (b)/(d) plateau-adjacent jump strength reaching sigma_min
      double excess = signed_strength(i) - sigma_min_;
      if (excess <= 0.0)
        offer({classify_vanishing(i), front_position(i), -excess, sigma_min_});
      else {
        // (c) Liu admissibility loss as the plateau value drifts.  The
        // flux-unit margin is used: the slope-unit one divides by the
        // node-to-state distance, which blows roundoff up into false
        // triggers whenever the plateau value hovers near a grid node.
        const PiecewiseAffineFlux& flux = (family_[i] == FrontFamily::F) ? fx_.f_nu : fx_.g_nu;
        double margin = liu_margin_flux(flux, ul, ur);
        double trig = liu_trigger_;
        if (margin < -trig) offer({EventKind::AdmissibilityLoss, front_position(i), -margin, trig});
      }
    }
    return best;
  }

  bool crossing_is_tight(const Crossing& c) const { return c.violation <= 0.5 * c.threshold_scale; }

  // A plateau value met a neighbor state.  If the neighbor is itself an
  // extremum, or the extended interval remains a local extremum, the two
  // regions merge (case i); otherwise the extremum is absorbed.
  EventKind classify_vanishing(std::size_t i) const {
    std::size_t lc = left_cell(i), rc = right_cell(i);
    std::size_t pc, oc;  // plateau cell, other cell
    if (extremum_[lc] != 0 && extremum_[rc] != 0) return EventKind::ExtremaMerge;
    if (extremum_[lc] != 0) {
      pc = lc;
      oc = rc;
    } else if (extremum_[rc] != 0) {
      pc = rc;
      oc = lc;
    } else {
      return EventKind::JumpVanishes;
    }
    // value beyond the neighbor cell, moving away from the plateau
    std::size_t n = cells_.size();
    std::size_t beyond;
    if (topo_ == Topology::line) {
      if (oc == 0 || oc == n - 1) return EventKind::JumpVanishes;
      beyond = (oc > pc) ? oc + 1 : oc - 1;
    } else {
      beyond = (oc == right_cell(i) && oc != pc) ? (oc + 1) % n : (oc + n - 1) % n;
    }
    double vb = cells_[beyond], vn = cells_[oc];
    if (extremum_[pc] > 0) return vb < vn ? EventKind::ExtremaMerge : EventKind::JumpVanishes;
    return vb > vn ? EventKind::ExtremaMerge : EventKind::JumpVanishes;
  }

  // ---- (re)initialization ----------------------------------------------

  void init_from_profile(const Profile& raw) {
    Profile p = raw;
    p.merge_equal(sigma_min_);
    p.validate();
    topo_ = p.topology;

    pos_.clear();
    speed_.clear();
    family_.clear();
    cells_.clear();
    extremum_.clear();
    dynamic_.clear();
    dyn_fronts_.clear();
    ext_cells_.clear();
    mon_pairs_.clear();
    ref_time_ = time_;

    if (topo_ == Topology::line) {
      cells_.push_back(p.values[0]);
      for (std::size_t k = 0; k < p.breakpoints.size(); ++k) {
        auto fan = solve_riemann(p.values[k], p.values[k + 1], fx_.f_nu, fx_.g_nu,
                                 p.breakpoints[k], sigma_min_);
        for (const auto& fr : fan) {
          pos_.push_back(fr.position);
          speed_.push_back(fr.speed);
          family_.push_back(fr.family);
          cells_.push_back(fr.u_right);
        }
        if (fan.empty()) cells_.back() = p.values[k + 1];  // sub-threshold jump: carry on
      }
    } else {
      std::size_t nb = p.breakpoints.size();
      if (nb == 0) {
        cells_.push_back(p.values[0]);
      } else {
        for (std::size_t k = 0; k < nb; ++k) {
          std::size_t prev = (k + nb - 1) % nb;
          auto fan = solve_riemann(p.values[prev], p.values[k], fx_.f_nu, fx_.g_nu,
                                   p.breakpoints[k], sigma_min_);
          for (const auto& fr : fan) {
            pos_.push_back(fr.position);
            speed_.push_back(fr.speed);
            family_.push_back(fr.family);
            cells_.push_back(fr.u_right);
          }
          // fan cells are "right of front"; the last one carries p.values[k]
        }
      }
    }

    std::size_t n = cells_.size();
    dynamic_.assign(pos_.size(), 0);
    extremum_.assign(n, 0);
    if (pos_.size() >= 2) {
      for (std::size_t c = 0; c < n; ++c) {
        if (topo_ == Topology::line && (c == 0 || c == n - 1)) continue;
        if (topo_ == Topology::periodic && plateau_width(c) <= 0.0) continue;
        if (topo_ == Topology::line) {
          double xl = pos_[c - 1], xr = pos_[c];
          if (xr - xl <= 0.0) continue;
        }
        double v = cells_[c];
        double vl = cells_[(c + n - 1) % n];
        double vr = cells_[(c + 1) % n];
        if (topo_ == Topology::line) {
          vl = cells_[c - 1];
          vr = cells_[c + 1];
        }
        if (v > vl && v > vr) extremum_[c] = 1;
        else if (v < vl && v < vr) extremum_[c] = -1;
      }
    }

    for (std::size_t c = 0; c < n; ++c) {
      if (extremum_[c] == 0) continue;
      ext_cells_.push_back(c);
      auto [l, r] = plateau_fronts(c);
      dynamic_[l] = 1;
      dynamic_[r] = 1;
    }
    for (std::size_t i = 0; i < pos_.size(); ++i)
      if (dynamic_[i]) dyn_fronts_.push_back(i);

    // adjacent pairs with a dynamic member: the only gaps that can change
    // between restarts (per-substep monitors iterate these, not all fronts)
    std::size_t m = pos_.size();
    if (m >= 2) {
      std::size_t n_pairs = (topo_ == Topology::periodic) ? m : m - 1;
      for (std::size_t i = 0; i < n_pairs; ++i) {
        std::size_t j = (i + 1) % m;
        if (dynamic_[i] || dynamic_[j]) mon_pairs_.push_back({i, j});
      }
    }

    if (opt_.debug_flip_first_speed && !speed_.empty() && !dynamic_[0]) speed_[0] = -speed_[0];

    liu_trigger_ = 1e-12 * std::max(1.0, lambda_);
    stats_.max_front_count = std::max(stats_.max_front_count, pos_.size());
  }

  // state
  Topology topo_ = Topology::periodic;
  double time_ = 0.0;
  double ref_time_ = 0.0;  // frozen front positions are stored at this time
  std::vector<double> pos_, speed_;
  std::vector<FrontFamily> family_;
  std::vector<double> cells_;
  std::vector<signed char> extremum_;  // per cell: +1 max, -1 min, 0 none
  std::vector<char> dynamic_;          // per front: adjacent to a plateau
  std::vector<std::size_t> dyn_fronts_, ext_cells_;
  std::vector<std::pair<std::size_t, std::size_t>> mon_pairs_;

  SampledFluxes fx_;
  double c0_ = 1.0;
  double lambda_ = 1.0;
  double sigma_min_ = 1e-13;
  double gap_max_ = 1.0;
  double liu_trigger_ = 1e-12;
  TrackerOptions opt_;
  TrackerStats stats_;
};

}  // namespace twoflux

#endif  // TWOFLUX_TRACKER_HPP_
