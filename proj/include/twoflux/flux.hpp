#ifndef TWOFLUX_FLUX_HPP_
#define TWOFLUX_FLUX_HPP_

// Flux-pair representation for the gradient-switched conservation law
//   u_t + [theta(u_x) f(u) + (1 - theta(u_x)) g(u)]_x = 0,   f < g.
//
// Provides the smooth pair (f, g), its piecewise affine sampling on the
// dyadic grid 2^-nu Z, convex/concave envelope construction for Riemann
// fans, the Liu admissibility test, and the smooth switch function
// theta_eps used by the viscous regularization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoflux {

/// Polynomial with real coefficients, c[k] multiplying u^k.
struct Polynomial {
  std::vector<double> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}

  double operator()(double u) const {
    double r = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) r = r * u + c[k];
    return r;
  }

  Polynomial derivative() const {
    if (c.size() <= 1) return Polynomial{{0.0}};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * double(k);
    return Polynomial{std::move(d)};
  }

  int degree() const {
    int d = int(c.size()) - 1;
    while (d > 0 && c[std::size_t(d)] == 0.0) --d;
    return d;
  }
};

/// A pair of smooth fluxes with a uniform gap g - f >= c0 > 0 on u_range.
///
/// Derivatives are analytic (polynomial catalog); no symbolic machinery.
struct SmoothFluxPair {
  Polynomial f;
  Polynomial g;
  double c0 = 0.0;
  double u_min = -1.0;
  double u_max = 1.0;

  Polynomial df, dg;  // first derivatives, kept alongside

  SmoothFluxPair() = default;
  SmoothFluxPair(Polynomial f_, Polynomial g_, double c0_, double umin, double umax)
      : f(std::move(f_)), g(std::move(g_)), c0(c0_), u_min(umin), u_max(umax) {
    df = f.derivative();
    dg = g.derivative();
    validate();
  }

  /// Checks the gap invariant g - f >= c0 on a dense sample of u_range.
  void validate(int n_samples = 4001) const {
    if (!(c0 > 0.0)) throw std::invalid_argument("flux pair: c0 must be positive");
    if (!(u_min < u_max)) throw std::invalid_argument("flux pair: empty u_range");
    for (int i = 0; i < n_samples; ++i) {
      double u = u_min + (u_max - u_min) * double(i) / double(n_samples - 1);
      double fv = f(u), gv = g(u);
      if (!std::isfinite(fv) || !std::isfinite(gv))
        throw std::domain_error("flux pair: non-finite flux value at u=" + std::to_string(u));
      if (gv - fv < c0 * (1.0 - 1e-12))
        throw std::invalid_argument("flux pair: gap g-f < c0 at u=" + std::to_string(u));
    }
  }
};

/// Upper bound on all wave speeds for states |u| <= m, with a small safety
/// factor.  Brute-force dense sampling of |f'| and |g'|.
inline double max_wave_speed(const SmoothFluxPair& pair, double m, int n_samples = 4001) {
  if (m < 0.0) throw std::invalid_argument("max_wave_speed: m must be >= 0");
  double lam = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double u = -m + 2.0 * m * double(i) / double(n_samples - 1);
    lam = std::max(lam, std::max(std::abs(pair.df(u)), std::abs(pair.dg(u))));
  }
  return lam * (1.0 + 1e-6);
}

/// Piecewise affine interpolant of a flux on the grid u_j = 2^-nu j,
/// stored as node values over the window [j_min, j_max].
class PiecewiseAffineFlux {
 public:
  PiecewiseAffineFlux() = default;
  PiecewiseAffineFlux(int nu, std::int64_t j_min, std::vector<double> values)
      : nu_(nu), j_min_(j_min), values_(std::move(values)) {
    if (nu < 1) throw std::invalid_argument("PiecewiseAffineFlux: nu must be >= 1");
    if (values_.size() < 2) throw std::invalid_argument("PiecewiseAffineFlux: need >= 2 nodes");
    h_ = std::ldexp(1.0, -nu);
    inv_h_ = std::ldexp(1.0, nu);
  }

  int nu() const { return nu_; }
  double grid_step() const { return h_; }
  std::int64_t j_min() const { return j_min_; }
  std::int64_t j_max() const { return j_min_ + std::int64_t(values_.size()) - 1; }
  double u_lo() const { return double(j_min()) * h_; }
  double u_hi() const { return double(j_max()) * h_; }

  double node_u(std::int64_t j) const { return double(j) * h_; }
  double node_value(std::int64_t j) const {
    check_node(j);
    return values_[std::size_t(j - j_min_)];
  }

  /// Affine interpolation between grid nodes; table value exactly at nodes.
  double operator()(double u) const {
    std::int64_t j = cell_index(u);
    if (u == node_u(j)) return node_value(j);
    double u_j = node_u(j);
    double w = (u - u_j) * inv_h_;
    return values_[std::size_t(j - j_min_)] * (1.0 - w) + values_[std::size_t(j - j_min_ + 1)] * w;
  }

  /// Index j of the cell [u_j, u_{j+1}] containing u; node hits map to the
  /// cell having u as its left endpoint (except at the upper window edge).
  std::int64_t cell_index(double u) const {
    if (u < u_lo() || u > u_hi())
      throw std::out_of_range("PiecewiseAffineFlux: u outside grid window");
    auto j = std::int64_t(std::floor(u * inv_h_));
    if (j >= j_max()) j = j_max() - 1;
    if (j < j_min_) j = j_min_;
    return j;
  }

 private:
  void check_node(std::int64_t j) const {
    if (j < j_min_ || j > j_max())
      throw std::out_of_range("PiecewiseAffineFlux: node outside window");
  }

  int nu_ = 1;
  std::int64_t j_min_ = 0;
  std::vector<double> values_;
  double h_ = 0.5, inv_h_ = 2.0;
};

struct SampledFluxes {
  PiecewiseAffineFlux f_nu;
  PiecewiseAffineFlux g_nu;
};

/// Samples both members of a pair onto the 2^-nu grid over a window
/// covering [lo, hi] with one extra node on each side.
inline SampledFluxes sample_flux(const SmoothFluxPair& pair, int nu, double lo, double hi) {
  if (nu < 1) throw std::invalid_argument("sample_flux: nu must be >= 1");
  if (!(lo <= hi)) throw std::invalid_argument("sample_flux: empty window");
  double h = std::ldexp(1.0, -nu);
  auto j_min = std::int64_t(std::floor(lo / h)) - 1;
  auto j_max = std::int64_t(std::ceil(hi / h)) + 1;
  std::vector<double> fv(std::size_t(j_max - j_min + 1)), gv(fv.size());
  for (std::int64_t j = j_min; j <= j_max; ++j) {
    double u = double(j) * h;
    double a = pair.f(u), b = pair.g(u);
    if (!std::isfinite(a) || !std::isfinite(b))
      throw std::domain_error("sample_flux: non-finite flux value at node j=" + std::to_string(j));
    fv[std::size_t(j - j_min)] = a;
    gv[std::size_t(j - j_min)] = b;
  }
  return {PiecewiseAffineFlux(nu, j_min, std::move(fv)),
          PiecewiseAffineFlux(nu, j_min, std::move(gv))};
}

/// Sampling window sized from the data: [-amp - 2^-nu, amp + 2^-nu].
/// The L-infinity norm decays in time, so states never escape it.
inline SampledFluxes sample_flux_for_amplitude(const SmoothFluxPair& pair, int nu, double amp) {
  double h = std::ldexp(1.0, -nu);
  return sample_flux(pair, nu, -amp - h, amp + h);
}

/// One wave of a Riemann fan in state space: the jump from u_from to u_to
/// traveling at the chord slope of the dispatched flux.
struct EnvelopeSegment {
  double u_from;
  double u_to;
  double speed;
};

namespace detail {

// Breakpoint list {u_l, u_r} plus grid nodes strictly between, ordered from
// lo to hi, with flux values attached.
inline void envelope_points(const PiecewiseAffineFlux& flux, double lo, double hi,
                            std::vector<double>& us, std::vector<double>& vals) {
  us.clear();
  vals.clear();
  us.push_back(lo);
  double h = flux.grid_step();
  auto j0 = std::int64_t(std::floor(lo / h)) + 1;
  for (std::int64_t j = j0; double(j) * h < hi; ++j) {
    double u = double(j) * h;
    if (u > lo) us.push_back(u);
  }
  us.push_back(hi);
  vals.reserve(us.size());
  for (double u : us) vals.push_back(flux(u));
}

// Monotone-chain convex minorant over the points (us[i], vals[i]); collinear
// middle points are dropped so chord slopes are strictly increasing.
inline std::vector<std::size_t> convex_chain(const std::vector<double>& us,
                                             const std::vector<double>& vals) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < us.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      double cross = (us[b] - us[a]) * (vals[i] - vals[a]) - (us[i] - us[a]) * (vals[b] - vals[a]);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  return hull;
}

}  // namespace detail

/// Convex minorant of the polygonal graph of `flux` restricted to
/// [u_l, u_r], u_l < u_r, as a fan of segments with strictly increasing
/// chord slopes.  Vertices of the minorant are the intermediate states of
/// the entropy solution for an upward jump.
inline std::vector<EnvelopeSegment> lower_convex_envelope(const PiecewiseAffineFlux& flux,
                                                          double u_l, double u_r) {
  if (!(u_l < u_r)) throw std::invalid_argument("lower_convex_envelope: need u_l < u_r");
  std::vector<double> us, vals;
  detail::envelope_points(flux, u_l, u_r, us, vals);
  auto hull = detail::convex_chain(us, vals);
  std::vector<EnvelopeSegment> segs;
  segs.reserve(hull.size() - 1);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    double a = us[hull[k]], b = us[hull[k + 1]];
    segs.push_back({a, b, (vals[hull[k + 1]] - vals[hull[k]]) / (b - a)});
  }
  return segs;
}

/// Concave majorant counterpart for a downward jump u_l > u_r.  Segments
/// are returned in spatial order, left to right: from u_l down through the
/// majorant vertices to u_r, with strictly increasing speeds.
inline std::vector<EnvelopeSegment> upper_concave_envelope(const PiecewiseAffineFlux& flux,
                                                           double u_l, double u_r) {
  if (!(u_l > u_r)) throw std::invalid_argument("upper_concave_envelope: need u_l > u_r");
  std::vector<double> us, vals;
  detail::envelope_points(flux, u_r, u_l, us, vals);
  for (double& v : vals) v = -v;  // concave majorant = convex minorant of -flux
  auto hull = detail::convex_chain(us, vals);
  // Hull runs u_r -> u_l in state space; slopes of -flux increase, so the
  // flux chord slopes decrease with u.  Spatial order starts at u_l.
  std::vector<EnvelopeSegment> segs;
  segs.reserve(hull.size() - 1);
  for (std::size_t k = hull.size() - 1; k > 0; --k) {
    double a = us[hull[k]], b = us[hull[k - 1]];  // a > b
    segs.push_back({a, b, -(vals[hull[k - 1]] - vals[hull[k]]) / (b - a)});
  }
  return segs;
}

/// Liu admissibility of a jump (u_minus, u_plus) under `flux`: the
/// Rankine-Hugoniot speed must not exceed the chord slope from u_minus to
/// any intermediate breakpoint.  Equality counts as admissible.  For a
/// polygonal flux only grid nodes strictly between the states matter.
inline bool liu_admissible(const PiecewiseAffineFlux& flux, double u_minus, double u_plus) {
  if (u_minus == u_plus) throw std::invalid_argument("liu_admissible: zero jump");
  double lambda = (flux(u_plus) - flux(u_minus)) / (u_plus - u_minus);
  double lo = std::min(u_minus, u_plus), hi = std::max(u_minus, u_plus);
  double h = flux.grid_step();
  auto j0 = std::int64_t(std::floor(lo / h)) + 1;
  for (std::int64_t j = j0; double(j) * h < hi; ++j) {
    double u_star = double(j) * h;
    if (u_star <= lo) continue;
    double chord = (flux(u_star) - flux(u_minus)) / (u_star - u_minus);
    if (lambda > chord) return false;
  }
  return true;
}

/// Signed margin min over interior nodes of (chord - speed); >= 0 iff Liu
/// holds.  Used for event detection as a plateau value drifts.
inline double liu_margin(const PiecewiseAffineFlux& flux, double u_minus, double u_plus) {
  double lambda = (flux(u_plus) - flux(u_minus)) / (u_plus - u_minus);
  double lo = std::min(u_minus, u_plus), hi = std::max(u_minus, u_plus);
  double h = flux.grid_step();
  double margin = std::numeric_limits<double>::infinity();
  auto j0 = std::int64_t(std::floor(lo / h)) + 1;
  for (std::int64_t j = j0; double(j) * h < hi; ++j) {
    double u_star = double(j) * h;
    if (u_star <= lo) continue;
    double chord = (flux(u_star) - flux(u_minus)) / (u_star - u_minus);
    margin = std::min(margin, chord - lambda);
  }
  return margin;
}

/// Vertical variant of liu_margin: min over interior nodes of the flux-unit
/// gap between the node value and the chord line,
///   sign(u_plus - u_minus) * (flux(u_star) - flux(u_minus) - lambda (u_star - u_minus)).
/// Same sign and same roots in time as liu_margin, but free of the 1/(u_star
/// - u_minus) amplification: when a drifting plateau value sits a hair past a
/// grid node the slope margin turns eps-level flux roundoff into O(1) noise
/// (catastrophic for degenerate, e.g. affine, fluxes whose true margin is 0),
/// while this margin stays within a few eps of the exact value.
inline double liu_margin_flux(const PiecewiseAffineFlux& flux, double u_minus, double u_plus) {
  double f_minus = flux(u_minus);
  double lambda = (flux(u_plus) - f_minus) / (u_plus - u_minus);
  double sgn = (u_plus > u_minus) ? 1.0 : -1.0;
  double lo = std::min(u_minus, u_plus), hi = std::max(u_minus, u_plus);
  double h = flux.grid_step();
  double margin = std::numeric_limits<double>::infinity();
  auto j0 = std::int64_t(std::floor(lo / h)) + 1;
  // interior points are exact grid nodes: read the table directly (this is
  // a per-substep monitor, interpolation overhead dominates otherwise)
  for (std::int64_t j = j0; double(j) * h < hi; ++j) {
    double u_star = double(j) * h;
    if (u_star <= lo) continue;
    margin = std::min(margin, sgn * (flux.node_value(j) - f_minus - lambda * (u_star - u_minus)));
  }
  return margin;
}

/// Smooth switch s -> theta(s/eps), the regularization of the step
/// function of u_x.  The base profile is the cubic
///   theta(s) = 1/2 + (3/4)(s - s^3/3)  on [-1, 1],
/// clamped to 0 / 1 outside, so theta(0) = 1/2, theta' is even,
/// theta'(s) = (3/4)(1 - s^2) >= 1/2 on |s| <= 1/2.
struct SwitchFunction {
  double epsilon = 1.0;

  explicit SwitchFunction(double eps = 1.0) : epsilon(eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("SwitchFunction: epsilon must be positive");
  }

  static double base(double s) {
    if (s >= 1.0) return 1.0;
    if (s <= -1.0) return 0.0;
    return 0.5 + 0.75 * (s - s * s * s / 3.0);
  }
  static double base_prime(double s) {
    if (s >= 1.0 || s <= -1.0) return 0.0;
    return 0.75 * (1.0 - s * s);
  }
  static constexpr double max_base_prime() { return 0.75; }

  double operator()(double s) const { return base(s / epsilon); }
  double prime(double s) const { return base_prime(s / epsilon) / epsilon; }
};

/// Built-in flux-pair catalog.  Parameters default sensibly; `amp` sets the
/// validity window [-amp, amp].
///
///   burgers_shifted:  f = u^2/2,         g = f + gap
///   traffic_concave:  f = u (1 - u),     g = f + gap
///   constant_gap:     f = f0,            g = f0 + gap
///   cubic:            f = u^3/3 - u,     g = f + gap
///   custom:           f, g given as coefficient lists (must satisfy the gap)
inline SmoothFluxPair make_flux_pair(const std::string& name,
                                     const std::map<std::string, double>& params = {},
                                     const std::vector<double>& f_coeffs = {},
                                     const std::vector<double>& g_coeffs = {}) {
  auto get = [&](const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  double gap = get("gap", 1.0);
  double amp = get("amp", 4.0);
  if (name == "burgers_shifted") {
    Polynomial f{{0.0, 0.0, 0.5}};
    Polynomial g{{gap, 0.0, 0.5}};
    return SmoothFluxPair(f, g, gap, -amp, amp);
  }
  if (name == "traffic_concave") {
    Polynomial f{{0.0, 1.0, -1.0}};
    Polynomial g{{gap, 1.0, -1.0}};
    return SmoothFluxPair(f, g, gap, -amp, amp);
  }
  if (name == "constant_gap") {
    double f0 = get("f0", 0.0);
    Polynomial f{{f0}};
    Polynomial g{{f0 + gap}};
    return SmoothFluxPair(f, g, gap, -amp, amp);
  }
  if (name == "cubic") {
    Polynomial f{{0.0, -1.0, 0.0, 1.0 / 3.0}};
    Polynomial g{{gap, -1.0, 0.0, 1.0 / 3.0}};
    return SmoothFluxPair(f, g, gap, -amp, amp);
  }
  if (name == "custom") {
    if (f_coeffs.empty() || g_coeffs.empty())
      throw std::invalid_argument("custom flux pair needs f and g coefficient lists");
    double c0 = get("c0", gap);
    return SmoothFluxPair(Polynomial{f_coeffs}, Polynomial{g_coeffs}, c0, -amp, amp);
  }
  throw std::invalid_argument("unknown flux catalog entry: " + name);
}

}  // namespace twoflux

#endif  // TWOFLUX_FLUX_HPP_
