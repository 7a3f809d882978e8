#ifndef TWOFLUX_SCENARIOS_HPP_
#define TWOFLUX_SCENARIOS_HPP_

// Canned initial data: square waves, staircases, seeded random profiles,
// and the exponential example used for plateau-regrowth studies.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "twoflux/profile.hpp"

namespace twoflux {
namespace scenarios {

/// height on [x_lo, x_hi), base elsewhere.
inline Profile square_wave(Topology topo, double x_lo, double x_hi, double height,
                           double base = 0.0) {
  if (!(x_lo < x_hi)) throw std::invalid_argument("square_wave: x_lo < x_hi required");
  Profile p;
  p.topology = topo;
  p.breakpoints = {x_lo, x_hi};
  if (topo == Topology::line) {
    p.values = {base, height, base};
  } else {
    // periodic: values[i] holds on [b[i], b[i+1]) with wraparound
    p.values = {height, base};
  }
  return p;
}

/// n equal steps from v_lo to v_hi across [x_lo, x_hi], constant v_lo to the
/// left and v_hi to the right (line) or wrapping back down in one jump
/// (periodic).
inline Profile staircase(Topology topo, int n_steps, double x_lo, double x_hi, double v_lo,
                         double v_hi) {
  if (n_steps < 1) throw std::invalid_argument("staircase: need at least one step");
  Profile p;
  p.topology = topo;
  double dv = (v_hi - v_lo) / double(n_steps);
  double dx = (x_hi - x_lo) / double(n_steps);
  if (topo == Topology::line) {
    p.values.push_back(v_lo);
    for (int k = 1; k <= n_steps; ++k) {
      p.breakpoints.push_back(x_lo + double(k - 1) * dx);
      p.values.push_back(v_lo + double(k) * dv);
    }
  } else {
    for (int k = 0; k < n_steps; ++k) {
      p.breakpoints.push_back(x_lo + double(k) * dx);
      p.values.push_back(v_lo + double(k + 1) * dv);
    }
    p.breakpoints.push_back(x_hi);
    p.values.push_back(v_lo);
  }
  p.validate();
  return p;
}

/// Seeded random piecewise-constant data with n_jumps jumps, values uniform
/// in [-amplitude, amplitude].  Periodic: n_jumps cells on sorted uniform
/// breakpoints in (0, 1).  Line: compactly supported on (-1, 1).
/// Deterministic across platforms (mt19937_64 with explicit transforms).
inline Profile random_piecewise(std::uint64_t seed, int n_jumps, double amplitude,
                                Topology topo = Topology::periodic) {
  if (n_jumps < 2) throw std::invalid_argument("random_piecewise: need at least two jumps");
  std::mt19937_64 rng(seed);
  auto unit = [&rng] {
    // top 53 bits -> [0, 1); avoids distribution-implementation variance
    return double(rng() >> 11) * 0x1p-53;
  };
  Profile p;
  p.topology = topo;
  double span_lo = topo == Topology::line ? -1.0 : 0.02;
  double span_hi = topo == Topology::line ? 1.0 : 0.98;
  std::vector<double> xs(std::size_t(n_jumps), 0.0);
  for (double& x : xs) x = span_lo + (span_hi - span_lo) * unit();
  std::sort(xs.begin(), xs.end());
  p.breakpoints = xs;
  if (topo == Topology::line) {
    p.values.push_back(0.0);
    for (int k = 1; k < n_jumps; ++k) p.values.push_back(amplitude * (2.0 * unit() - 1.0));
    p.values.push_back(0.0);
  } else {
    for (int k = 0; k < n_jumps; ++k) p.values.push_back(amplitude * (2.0 * unit() - 1.0));
  }
  // regenerate any accidental equal neighbours away (vanishing probability,
  // but keep the invariant airtight)
  for (std::size_t i = 1; i < p.values.size(); ++i)
    while (p.values[i] == p.values[i - 1]) p.values[i] = amplitude * (2.0 * unit() - 1.0);
  if (topo == Topology::periodic)
    while (p.values.back() == p.values.front())
      p.values.back() = amplitude * (2.0 * unit() - 1.0);
  p.validate();
  return p;
}

/// Exponential wedge: u0(x) = e^x for x < 0, -e^{-x} for x > 0, truncated to
/// [-x_max, x_max] and sampled as piecewise-constant cell midpoint values on
/// n_cells uniform cells per side.
inline Profile example_exponential(double x_max = 5.0, int n_cells_per_side = 200) {
  if (!(x_max > 0.0) || n_cells_per_side < 1)
    throw std::invalid_argument("example_exponential: bad parameters");
  Profile p;
  p.topology = Topology::line;
  double dx = x_max / double(n_cells_per_side);
  p.values.push_back(0.0);
  for (int k = 0; k < 2 * n_cells_per_side; ++k) {
    double lo = -x_max + double(k) * dx;
    double mid = lo + 0.5 * dx;
    p.breakpoints.push_back(lo);
    p.values.push_back(mid < 0.0 ? std::exp(mid) : -std::exp(-mid));
  }
  p.breakpoints.push_back(x_max);
  p.values.push_back(0.0);
  p.validate();
  return p;
}

}  // namespace scenarios
}  // namespace twoflux

#endif  // TWOFLUX_SCENARIOS_HPP_
