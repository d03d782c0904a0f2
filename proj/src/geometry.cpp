#include "bhflow/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bhflow {

namespace {

void require_exterior(double r, const SpacetimeParams& params, const char* who) {
  if (!std::isfinite(r)) {
    throw std::domain_error(std::string(who) + ": non-finite radius");
  }
  if (params.m > 0.0) {
    if (r <= params.horizon_radius()) {
      throw std::domain_error(std::string(who) + ": r = " + std::to_string(r) +
                              " is not exterior (horizon at r = " +
                              std::to_string(params.horizon_radius()) + ")");
    }
  } else if (r <= 0.0) {
    throw std::domain_error(std::string(who) + ": r must be positive for m = 0");
  }
}

// One Halley step for w*e^w - x = 0, written in terms of the Newton
// correction so nothing overflows for large x.
double halley_step(double w, double x) {
  const double ew = std::exp(w);
  const double newton = (w * ew - x) / (ew * (1.0 + w));
  const double ratio = (2.0 + w) / (1.0 + w);  // f'' / f'
  return w - newton / (1.0 - 0.5 * newton * ratio);
}

// One Halley step for w + log(w) - y = 0 (w > 0), the log-space form of W0.
double halley_step_log(double w, double y) {
  const double newton = (w + std::log(w) - y) / (1.0 + 1.0 / w);
  const double ratio = -1.0 / (w * (w + 1.0));  // f'' / f'
  return w - newton / (1.0 - 0.5 * newton * ratio);
}

}  // namespace

void SpacetimeParams::validate() const {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw std::invalid_argument("SpacetimeParams: m must be finite and >= 0");
  }
}

double metric_function(double r, const SpacetimeParams& params) {
  require_exterior(r, params, "metric_function");
  return 1.0 - 2.0 * params.m / r;
}

double tortoise_from_radial(double r, const SpacetimeParams& params) {
  require_exterior(r, params, "tortoise_from_radial");
  if (params.m == 0.0) return r;
  const double two_m = 2.0 * params.m;
  return r + two_m * std::log(r / two_m - 1.0);
}

double lambert_w0(double x) {
  constexpr double inv_e = 0.36787944117144232160;  // 1/e
  if (!std::isfinite(x) || x < -inv_e) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.25) {
    // Series about the branch point x = -1/e.
    const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    if (w <= -1.0) w = -1.0 + 1e-12;
  } else if (x < 2.0) {
    w = x / (1.0 + x);  // crude but in the basin
  } else {
    const double lx = std::log(x);
    const double llx = std::log(lx);
    w = lx - llx + llx / lx;
  }

  const double tol = 1e-15 * std::max(1.0, std::abs(x));
  for (int i = 0; i < 50; ++i) {
    const double next = halley_step(w, x);
    if (!std::isfinite(next)) break;
    const double dw = std::abs(next - w);
    w = next;
    if (std::abs(w * std::exp(w) - x) <= tol || dw <= 4e-16 * std::max(1.0, std::abs(w))) {
      break;
    }
  }
  return w;
}

double lambert_w0_of_exp(double y) {
  // Solve w + log(w) = y; equivalent to W0(e^y) but immune to overflow.
  if (y < -700.0) return std::exp(y);  // w ~ e^y below double resolution of log
  if (y < 700.0) {
    // e^y is representable; reuse the direct form for its branch handling.
    return lambert_w0(std::exp(y));
  }
  double w = y - std::log(y);
  for (int i = 0; i < 50; ++i) {
    const double next = halley_step_log(w, y);
    const double dw = std::abs(next - w);
    w = next;
    if (dw <= 4e-16 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

double radial_from_tortoise(double r_star, const SpacetimeParams& params) {
  if (!std::isfinite(r_star)) {
    throw std::domain_error("radial_from_tortoise: non-finite r_star");
  }
  if (params.m == 0.0) return r_star;
  const double two_m = 2.0 * params.m;
  // r_star/2m = x + 1 + log x with x = r/2m - 1, so x = W0(e^{r_star/2m - 1}).
  const double x = lambert_w0_of_exp(r_star / two_m - 1.0);
  return two_m * (1.0 + x);
}

RadialEvent event_from_radial(double t, double r, const SpacetimeParams& params) {
  return RadialEvent{t, r, tortoise_from_radial(r, params)};
}

RadialEvent event_from_tortoise(double t, double r_star, const SpacetimeParams& params) {
  return RadialEvent{t, radial_from_tortoise(r_star, params), r_star};
}

MetricComponents warp_metric(double v_s, double r, const SpacetimeParams& params) {
  const double f = metric_function(r, params);
  return MetricComponents{-(1.0 - v_s * v_s) * f, 1.0 / f, -v_s, v_s};
}

MetricComponents adm_warp_general(const Covector2& u, const Covector2& b,
                                  double lapse, const MetricComponents& base) {
  const double det = base.det2();
  if (det == 0.0 || !std::isfinite(det)) {
    throw std::domain_error("adm_warp_general: singular base metric");
  }
  // <b,b> with the base inverse: g^{ab} = adj(g)/det on the 2x2 block.
  const double bb = (base.g_rr * b.t * b.t - 2.0 * base.g_tr * b.t * b.r +
                     base.g_tt * b.r * b.r) /
                    det;
  const double k = 1.0 - lapse * lapse + bb;

  MetricComponents out;
  out.g_tt = k * u.t * u.t - 2.0 * u.t * b.t + base.g_tt;
  out.g_tr = k * u.t * u.r - u.t * b.r - u.r * b.t + base.g_tr;
  out.g_rr = k * u.r * u.r - 2.0 * u.r * b.r + base.g_rr;
  out.v_s = -out.g_tr;
  return out;
}

std::pair<double, double> null_velocity_roots(const MetricComponents& components,
                                              double r, const SpacetimeParams& params) {
  require_exterior(r, params, "null_velocity_roots");
  // g_rr w^2 + 2 g_tr w + g_tt = 0, solved without cancellation.
  const double a = components.g_rr;
  const double half_b = components.g_tr;
  const double c = components.g_tt;
  const double disc = half_b * half_b - a * c;
  const double sq = std::sqrt(std::max(disc, 0.0));
  // q carries the sign of -half_b so the subtraction never cancels.
  const double q = -(half_b + std::copysign(sq, half_b));
  double w1, w2;
  if (q != 0.0) {
    w1 = q / a;
    w2 = c / q;
  } else {  // half_b == 0
    w1 = sq / a;
    w2 = -sq / a;
  }
  // Order as (v_s + 1, v_s - 1) roots: outgoing first.
  if (w1 < w2) std::swap(w1, w2);
  return {w1, w2};
}

double null_interval_residual(const MetricComponents& components, double dr_dt) {
  return components.g_rr * dr_dt * dr_dt + 2.0 * components.g_tr * dr_dt +
         components.g_tt;
}

double shift_from_velocity_ratio(double rho) {
  return (std::abs(rho) - 1.0) * root_sign_for_ratio(rho);
}

double root_sign_for_ratio(double rho) { return rho >= 0.0 ? 1.0 : -1.0; }

double null_velocity_for_ratio(double rho, double r, const SpacetimeParams& params) {
  const auto metric = warp_metric(shift_from_velocity_ratio(rho), r, params);
  const auto [plus, minus] = null_velocity_roots(metric, r, params);
  return root_sign_for_ratio(rho) > 0.0 ? plus : minus;
}

}  // namespace bhflow
