#ifndef TWOFLUX_RIEMANN_HPP_
#define TWOFLUX_RIEMANN_HPP_

// Two-flux Riemann solver: upward jumps are resolved with the convex
// envelope of f_nu, downward jumps with the concave envelope of g_nu.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoflux/flux.hpp"

namespace twoflux {

enum class FrontFamily { F, G };

/// A moving discontinuity with constant left/right states between restarts.
struct Front {
  double position;
  double speed;
  double u_left;
  double u_right;
  FrontFamily family;

  double strength() const { return std::abs(u_right - u_left); }
};

/// Resolves the jump (u_l, u_r) at x0 into its admissible fan.  Speeds are
/// strictly increasing left to right; sub-sigma_min waves are merged away.
inline std::vector<Front> solve_riemann(double u_l, double u_r,
                                        const PiecewiseAffineFlux& f_nu,
                                        const PiecewiseAffineFlux& g_nu, double x0,
                                        double sigma_min = 0.0) {
  std::vector<Front> fronts;
  if (u_l == u_r) return fronts;

  std::vector<EnvelopeSegment> segs;
  FrontFamily fam;
  if (u_l < u_r) {
    segs = lower_convex_envelope(f_nu, u_l, u_r);
    fam = FrontFamily::F;
  } else {
    segs = upper_concave_envelope(g_nu, u_l, u_r);
    fam = FrontFamily::G;
  }

  // Drop zero-strength waves (floating-point hygiene): merge a tiny segment
  // into its neighbor, recomputing the chord speed for the merged jump.
  const auto& flux = (fam == FrontFamily::F) ? f_nu : g_nu;
  std::vector<EnvelopeSegment> kept;
  for (const auto& s : segs) {
    if (!kept.empty() && std::abs(s.u_to - s.u_from) < sigma_min) {
      kept.back().u_to = s.u_to;
      kept.back().speed =
          (flux(kept.back().u_to) - flux(kept.back().u_from)) / (kept.back().u_to - kept.back().u_from);
    } else if (!kept.empty() && std::abs(kept.back().u_to - kept.back().u_from) < sigma_min) {
      kept.back().u_to = s.u_to;
      kept.back().speed =
          (flux(kept.back().u_to) - flux(kept.back().u_from)) / (kept.back().u_to - kept.back().u_from);
    } else {
      kept.push_back(s);
    }
  }
  if (kept.size() == 1 && std::abs(kept[0].u_to - kept[0].u_from) < sigma_min) return fronts;

  fronts.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i > 0 && kept[i].speed <= fronts.back().speed) {
      // A chord over a jump of size ~sigma_min carries slope roundoff of
      // order eps * |flux| / jump, which can disorder the fan.  Such ties
      // are one wave physically: merge them.  Violations beyond that
      // roundoff envelope are genuine bugs.
      Front& prev = fronts.back();
      double ja = std::abs(prev.u_right - prev.u_left);
      double jb = std::abs(kept[i].u_to - kept[i].u_from);
      double fmag = std::max({1.0, std::abs(flux(prev.u_left)), std::abs(flux(kept[i].u_to))});
      double slope_eps = 8.0 * std::numeric_limits<double>::epsilon() * fmag /
                         std::max(std::min(ja, jb), 1e-300);
      double tol = 1e-12 * std::max(1.0, std::abs(prev.speed)) + slope_eps;
      if (prev.speed - kept[i].speed > tol)
        throw std::logic_error("solve_riemann: fan speeds not strictly increasing (" +
                               std::to_string(prev.speed) + " then " +
                               std::to_string(kept[i].speed) + ")");
      prev.u_right = kept[i].u_to;
      prev.speed = (flux(prev.u_right) - flux(prev.u_left)) / (prev.u_right - prev.u_left);
      continue;
    }
    fronts.push_back({x0, kept[i].speed, kept[i].u_from, kept[i].u_to, fam});
  }
  return fronts;
}

}  // namespace twoflux

#endif  // TWOFLUX_RIEMANN_HPP_
