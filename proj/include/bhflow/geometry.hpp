#pragma once

#include <utility>

namespace bhflow {

/// Black-hole parameters in geometric units (G = c = 1). The horizon sits
/// at r = 2m; every radial evaluation is exterior-only (r > 2m).
struct SpacetimeParams {
  double m = 1.0;

  constexpr double horizon_radius() const { return 2.0 * m; }
  void validate() const;
};

/// (t, r) block of the hybrid metric together with the shift scalar that
/// generated it. The 2D determinant g_tt*g_rr - g_tr^2 is -1 identically.
struct MetricComponents {
  double g_tt = -1.0;
  double g_rr = 1.0;
  double g_tr = 0.0;
  double v_s = 0.0;

  double det2() const { return g_tt * g_rr - g_tr * g_tr; }
};

/// Covariant 2-component object on the (t, r) block.
struct Covector2 {
  double t = 0.0;
  double r = 0.0;
};

/// An event on a radial worldline, carrying both radial charts.
/// r and r_star are kept consistent under the tortoise map.
struct RadialEvent {
  double t = 0.0;
  double r = 0.0;
  double r_star = 0.0;
};

/// f(r) = 1 - 2m/r, in (0, 1] on the exterior.
double metric_function(double r, const SpacetimeParams& params);

/// r_star = r + 2m ln(r/2m - 1); strictly increasing, -inf at the horizon.
double tortoise_from_radial(double r, const SpacetimeParams& params);

/// Exact inverse of the tortoise map onto the exterior r > 2m.
double radial_from_tortoise(double r_star, const SpacetimeParams& params);

/// Principal branch W0 of w*e^w = x for x >= -1/e.
/// Residual |w*e^w - x| <= 1e-14 * max(1, |x|).
double lambert_w0(double x);

/// W0(e^y) without forming e^y; safe for arbitrarily large y.
double lambert_w0_of_exp(double y);

RadialEvent event_from_radial(double t, double r, const SpacetimeParams& params);
RadialEvent event_from_tortoise(double t, double r_star, const SpacetimeParams& params);

/// Hybrid metric block for shift scalar v_s at radius r:
/// (g_tt, g_rr, g_tr) = (-(1 - v_s^2) f, 1/f, -v_s).
MetricComponents warp_metric(double v_s, double r, const SpacetimeParams& params);

/// Generic ADM warp construction
///   g_warp = (1 - lapse^2 + <b,b>) u u - u b - b u + g_base
/// with <b,b> taken with the base metric. Static-observer inputs
/// u = (-1, 0), b = (0, -v_s), lapse = 1 over Schwarzschild reproduce
/// warp_metric component-wise.
MetricComponents adm_warp_general(const Covector2& u, const Covector2& b,
                                  double lapse, const MetricComponents& base);

/// Both coordinate-velocity roots dr/dt of the null condition
///   g_rr w^2 + 2 g_tr w + g_tt = 0,
/// returned as (plus, minus) = f * (v_s + 1), f * (v_s - 1).
std::pair<double, double> null_velocity_roots(const MetricComponents& components,
                                              double r, const SpacetimeParams& params);

/// Residual of the null condition for a candidate coordinate velocity.
double null_interval_residual(const MetricComponents& components, double dr_dt);

/// Shift scalar reproducing a given velocity ratio rho = j1/j0 through the
/// null root of matching sign: v_s = (|rho| - 1) * sgn(rho), with
/// sgn(0) = +1.
double shift_from_velocity_ratio(double rho);

/// Sign of the null root that recovers dr/dt = f * rho.
double root_sign_for_ratio(double rho);

/// Coordinate velocity via the guiding-metric route: builds the hybrid
/// metric from rho, solves the null condition, picks the matching root.
double null_velocity_for_ratio(double rho, double r, const SpacetimeParams& params);

}  // namespace bhflow
