#ifndef TWOFLUX_PROFILE_HPP_
#define TWOFLUX_PROFILE_HPP_

// Spatially piecewise-constant functions, periodic (unit period) or on the
// line with compact support.  These are the states the front-tracking
// semigroup acts on.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace twoflux {

enum class Topology { periodic, line };

/// Piecewise-constant profile.
///
/// periodic: breakpoints sorted in [0, 1); values[i] holds on
///   [breakpoints[i], breakpoints[i+1]) with wraparound; an empty
///   breakpoint list plus a single value is a constant profile.
/// line: values.size() == breakpoints.size() + 1; values.front() and
///   values.back() are the two unbounded cells (zero for compact support).
struct Profile {
  Topology topology = Topology::periodic;
  std::vector<double> breakpoints;
  std::vector<double> values;

  static Profile constant_periodic(double v) { return {Topology::periodic, {}, {v}}; }

  static Profile zero_line() { return {Topology::line, {}, {0.0}}; }

  std::size_t n_cells() const { return values.size(); }

  void validate() const {
    if (values.empty()) throw std::invalid_argument("Profile: needs at least one cell");
    if (topology == Topology::periodic) {
      if (values.size() != breakpoints.size() && !(breakpoints.empty() && values.size() == 1))
        throw std::invalid_argument("Profile: periodic needs one value per breakpoint");
      for (double b : breakpoints)
        if (b < 0.0 || b >= 1.0) throw std::invalid_argument("Profile: breakpoint outside [0,1)");
    } else {
      if (values.size() != breakpoints.size() + 1)
        throw std::invalid_argument("Profile: line needs breakpoints+1 values");
    }
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
      throw std::invalid_argument("Profile: breakpoints not sorted");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (breakpoints[i] == breakpoints[i + 1])
        throw std::invalid_argument("Profile: duplicate breakpoint");
  }

  double operator()(double x) const {
    if (topology == Topology::periodic) {
      if (breakpoints.empty()) return values[0];
      double xm = x - std::floor(x);
      auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), xm);
      if (it == breakpoints.begin()) return values.back();  // before first breakpoint: wrap
      return values[std::size_t(it - breakpoints.begin()) - 1];
    }
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return values[std::size_t(it - breakpoints.begin())];
  }

  /// Merges adjacent cells whose values agree within tol.
  void merge_equal(double tol = 0.0) {
    if (topology == Topology::line) {
      std::vector<double> nb, nv;
      nv.push_back(values[0]);
      for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (std::abs(values[i + 1] - nv.back()) > tol) {
          nb.push_back(breakpoints[i]);
          nv.push_back(values[i + 1]);
        }
      }
      // dropping a jump keeps the left value, which at the right end would
      // replace the exact exterior state by a tol-sized residue; restore it
      if (std::abs(nv.back() - values.back()) <= tol) nv.back() = values.back();
      breakpoints = std::move(nb);
      values = std::move(nv);
    } else {
      if (breakpoints.empty()) return;
      std::vector<double> nb, nv;
      for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        std::size_t prev = (i + breakpoints.size() - 1) % breakpoints.size();
        if (std::abs(values[i] - values[prev]) > tol) {
          nb.push_back(breakpoints[i]);
          nv.push_back(values[i]);
        }
      }
      if (nb.empty()) {
        double mean = 0.0;
        // all cells equal within tol; collapse to width-weighted constant
        for (std::size_t i = 0; i < values.size(); ++i) mean += values[i] * cell_width(i);
        breakpoints.clear();
        values = {mean};
      } else {
        breakpoints = std::move(nb);
        values = std::move(nv);
      }
    }
  }

  double cell_width(std::size_t i) const {
    if (topology == Topology::periodic) {
      if (breakpoints.empty()) return 1.0;
      std::size_t nxt = (i + 1) % breakpoints.size();
      double w = breakpoints[nxt] - breakpoints[i];
      if (w <= 0.0) w += 1.0;
      return w;
    }
    throw std::logic_error("cell_width: unbounded cells on the line");
  }

  double total_variation() const {
    double tv = 0.0;
    if (topology == Topology::line) {
      for (std::size_t i = 0; i + 1 < values.size(); ++i) tv += std::abs(values[i + 1] - values[i]);
    } else {
      for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        std::size_t prev = (i + breakpoints.size() - 1) % breakpoints.size();
        tv += std::abs(values[i] - values[prev]);
      }
    }
    return tv;
  }

  double linf() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  /// L1 norm: one period (periodic) or the whole line (compact support).
  double l1() const {
    double s = 0.0;
    if (topology == Topology::periodic) {
      if (breakpoints.empty()) return std::abs(values[0]);
      for (std::size_t i = 0; i < values.size(); ++i) s += std::abs(values[i]) * cell_width(i);
    } else {
      if (values.front() != 0.0 || values.back() != 0.0)
        throw std::domain_error("Profile::l1: line profile not compactly supported");
      for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        s += std::abs(values[i + 1]) * (breakpoints[i + 1] - breakpoints[i]);
    }
    return s;
  }

  /// Signed mass over one period / the support.
  double mass() const {
    double s = 0.0;
    if (topology == Topology::periodic) {
      if (breakpoints.empty()) return values[0];
      for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * cell_width(i);
    } else {
      for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        s += values[i + 1] * (breakpoints[i + 1] - breakpoints[i]);
    }
    return s;
  }

  double mean() const {
    if (topology != Topology::periodic) throw std::logic_error("Profile::mean: periodic only");
    return mass();
  }
};

/// Exact L1 distance between two piecewise-constant profiles of the same
/// topology, integrating |a - b| over the union of their breakpoints.
inline double l1_distance(const Profile& a, const Profile& b) {
  if (a.topology != b.topology) throw std::invalid_argument("l1_distance: topology mismatch");
  if (a.topology == Topology::periodic) {
    std::vector<double> xs;
    xs.reserve(a.breakpoints.size() + b.breakpoints.size() + 1);
    xs.insert(xs.end(), a.breakpoints.begin(), a.breakpoints.end());
    xs.insert(xs.end(), b.breakpoints.begin(), b.breakpoints.end());
    xs.push_back(0.0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double lo = xs[i];
      double hi = (i + 1 < xs.size()) ? xs[i + 1] : xs[0] + 1.0;
      double mid = 0.5 * (lo + hi);
      s += std::abs(a(mid) - b(mid)) * (hi - lo);
    }
    return s;
  }
  std::vector<double> xs;
  xs.insert(xs.end(), a.breakpoints.begin(), a.breakpoints.end());
  xs.insert(xs.end(), b.breakpoints.begin(), b.breakpoints.end());
  if (xs.empty()) return 0.0;  // both constant; compact support forces 0
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double mid = 0.5 * (xs[i] + xs[i + 1]);
    s += std::abs(a(mid) - b(mid)) * (xs[i + 1] - xs[i]);
  }
  return s;
}

/// True when a <= b + tol pointwise (checked cell-exactly on the union of
/// breakpoints).  Union cells narrower than x_tol are skipped: a front the
/// two profiles share can land ulps apart after independent evolutions,
/// and the resulting sliver would register the full jump as an excess.
inline bool profile_le(const Profile& a, const Profile& b, double tol = 0.0,
                       double x_tol = 0.0) {
  if (a.topology != b.topology) throw std::invalid_argument("profile_le: topology mismatch");
  std::vector<double> xs;
  xs.insert(xs.end(), a.breakpoints.begin(), a.breakpoints.end());
  xs.insert(xs.end(), b.breakpoints.begin(), b.breakpoints.end());
  if (a.topology == Topology::periodic) xs.push_back(0.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.empty()) return a.values[0] <= b.values[0] + tol;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double lo = xs[i];
    double hi = (i + 1 < xs.size()) ? xs[i + 1]
                                    : (a.topology == Topology::periodic ? xs[0] + 1.0 : xs[i] + 1.0);
    if (hi - lo <= x_tol) continue;
    double mid = 0.5 * (lo + hi);
    if (a(mid) > b(mid) + tol) return false;
  }
  if (a.topology == Topology::line) {
    // exterior cells on each side
    if (a.values.front() > b.values.front() + tol) return false;
    if (a.values.back() > b.values.back() + tol) return false;
  }
  return true;
}

}  // namespace twoflux

#endif  // TWOFLUX_PROFILE_HPP_
