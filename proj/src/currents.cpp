#include "bhflow/currents.hpp"

#include <cmath>

#include "bhflow/errors.hpp"

namespace bhflow {

namespace {

double check_node(double j0, double node_floor, const char* who) {
  if (std::abs(j0) < node_floor) {
    throw NodeProximityError(std::string(who) + ": density below node floor",
                             j0, node_floor);
  }
  return j0;
}

}  // namespace

double density_scale(const WavepacketSpec& spec) {
  // Pure-packet peak: 2 k0 * (2 sigma^2 / pi)^{1/2}.
  return 2.0 * spec.k0 * spec.sigma * std::sqrt(2.0 / M_PI);
}

double default_node_floor(const WavepacketSpec& spec) {
  return 1e-12 * density_scale(spec);
}

CurrentSample single_current(double t, double r_star, const WavepacketSpec& spec) {
  const Complex psi = psi_single(t, r_star, spec);
  const WaveGradient grad = psi_single_gradient(t, r_star, spec);
  return CurrentSample{-2.0 * std::imag(std::conj(psi) * grad.d_t),
                       +2.0 * std::imag(std::conj(psi) * grad.d_rstar)};
}

double tortoise_velocity_single(double t, double r_star, const WavepacketSpec& spec,
                                double node_floor) {
  const CurrentSample j = single_current(t, r_star, spec);
  check_node(j.j0, node_floor, "tortoise_velocity_single");
  return j.j1 / j.j0;
}

double velocity_single(double t, double r, const SpacetimeParams& params,
                       const WavepacketSpec& spec, double node_floor) {
  const double f = metric_function(r, params);
  const double r_star = tortoise_from_radial(r, params);
  return f * tortoise_velocity_single(t, r_star, spec, node_floor);
}

double velocity_single(double t, double r, const SpacetimeParams& params,
                       const WavepacketSpec& spec) {
  return velocity_single(t, r, params, spec, default_node_floor(spec));
}

TwoPhotonCurrents two_photon_currents(const TwoPhotonEvent& ev,
                                      const WavepacketSpec& spec) {
  // psi = (T1 + T2)/sqrt(2), T1 = out(R1) in(R2), T2 = out(R2) in(R1).
  // Each derivative multiplies the affected mode by its exponent factor;
  // the product rule then acts term by term.
  const Complex out1 = outgoing_mode(ev.r1.t, ev.r1.r_star, spec);
  const Complex in1 = ingoing_mode(ev.r1.t, ev.r1.r_star, spec);
  const Complex out2 = outgoing_mode(ev.r2.t, ev.r2.r_star, spec);
  const Complex in2 = ingoing_mode(ev.r2.t, ev.r2.r_star, spec);

  const double s2 = spec.sigma * spec.sigma;
  const double u1 = ev.r1.t - ev.r1.r_star;
  const double v1 = ev.r1.t + ev.r1.r_star;
  const double u2 = ev.r2.t - ev.r2.r_star;
  const double v2 = ev.r2.t + ev.r2.r_star;
  const Complex au1{-2.0 * u1 * s2, -spec.k0};
  const Complex av1{-2.0 * v1 * s2, -spec.k0};
  const Complex au2{-2.0 * u2 * s2, -spec.k0};
  const Complex av2{-2.0 * v2 * s2, -spec.k0};

  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  const Complex t1 = out1 * in2;
  const Complex t2 = out2 * in1;
  const Complex psi = (t1 + t2) * inv_rt2;

  const Complex d_t1 = (au1 * t1 + av1 * t2) * inv_rt2;
  const Complex d_r1 = (-au1 * t1 + av1 * t2) * inv_rt2;
  const Complex d_t2 = (av2 * t1 + au2 * t2) * inv_rt2;
  const Complex d_r2 = (av2 * t1 - au2 * t2) * inv_rt2;

  const Complex cpsi = std::conj(psi);
  return TwoPhotonCurrents{-2.0 * std::imag(cpsi * d_t1),
                           +2.0 * std::imag(cpsi * d_r1),
                           -2.0 * std::imag(cpsi * d_t2),
                           +2.0 * std::imag(cpsi * d_r2)};
}

std::pair<double, double> velocity_two(const TwoPhotonEvent& ev,
                                       const SpacetimeParams& params,
                                       const WavepacketSpec& spec,
                                       double node_floor) {
  const TwoPhotonCurrents j = two_photon_currents(ev, spec);
  check_node(j.j1_0, node_floor, "velocity_two[photon 1]");
  check_node(j.j2_0, node_floor, "velocity_two[photon 2]");
  const double f1 = metric_function(ev.r1.r, params);
  const double f2 = metric_function(ev.r2.r, params);
  return {f1 * j.j1_1 / j.j1_0, f2 * j.j2_1 / j.j2_0};
}

double continuity_residual(double t, double r_star, const WavepacketSpec& spec,
                           double h) {
  const double dj0_dt = (single_current(t + h, r_star, spec).j0 -
                         single_current(t - h, r_star, spec).j0) /
                        (2.0 * h);
  const double dj1_dr = (single_current(t, r_star + h, spec).j1 -
                         single_current(t, r_star - h, spec).j1) /
                        (2.0 * h);
  return dj0_dt + dj1_dr;
}

std::pair<double, double> two_photon_continuity_residual(const TwoPhotonEvent& ev,
                                                         const WavepacketSpec& spec,
                                                         double h) {
  auto shifted = [&](double dt1, double dr1, double dt2, double dr2) {
    TwoPhotonEvent s = ev;
    s.r1.t += dt1;
    s.r1.r_star += dr1;
    s.r2.t += dt2;
    s.r2.r_star += dr2;
    return two_photon_currents(s, spec);
  };
  const double res1 = (shifted(h, 0, 0, 0).j1_0 - shifted(-h, 0, 0, 0).j1_0 +
                       shifted(0, h, 0, 0).j1_1 - shifted(0, -h, 0, 0).j1_1) /
                      (2.0 * h);
  const double res2 = (shifted(0, 0, h, 0).j2_0 - shifted(0, 0, -h, 0).j2_0 +
                       shifted(0, 0, 0, h).j2_1 - shifted(0, 0, 0, -h).j2_1) /
                      (2.0 * h);
  return {res1, res2};
}

namespace refform {

CurrentSample single_current_balanced(double t, double r_star,
                                      const WavepacketSpec& spec) {
  const double s2 = spec.sigma * spec.sigma;
  const double rho_plus = std::exp(-2.0 * (t - r_star) * (t - r_star) * s2);
  const double rho_minus = std::exp(-2.0 * (t + r_star) * (t + r_star) * s2);
  const double cross = std::sqrt(rho_plus * rho_minus);
  const double phase = 2.0 * spec.k0 * r_star;
  const double j_1 = 4.0 * s2 * t / spec.k0 * std::sin(phase);
  const double j_0 = std::cos(phase) - 2.0 * s2 * t / spec.k0 * std::sin(phase);
  const double norm = std::sqrt(2.0 / M_PI) * spec.sigma;
  return CurrentSample{norm * (rho_plus + rho_minus + j_0 * cross),
                       norm * (rho_plus - rho_minus + j_1 * cross)};
}

TwoPhotonCurrents two_photon_currents(const TwoPhotonEvent& ev,
                                      const WavepacketSpec& spec) {
  const double s2 = spec.sigma * spec.sigma;
  const double u1 = ev.r1.t - ev.r1.r_star;
  const double v1 = ev.r1.t + ev.r1.r_star;
  const double u2 = ev.r2.t - ev.r2.r_star;
  const double v2 = ev.r2.t + ev.r2.r_star;

  const double norm = 2.0 * s2 * spec.k0 / M_PI;
  const double lobe_a = std::exp(-2.0 * s2 * (v2 * v2 + u1 * u1));
  const double lobe_b = std::exp(-2.0 * s2 * (v1 * v1 + u2 * u2));
  const double overlap =
      std::exp(-s2 * (v1 * v1 + v2 * v2) - s2 * (u1 * u1 + u2 * u2));
  const double arg_density = spec.k0 * (u1 - u2 - v1 + v2);
  const double arg_current = spec.k0 * (v1 - v2 - u1 + u2);

  TwoPhotonCurrents j;
  j.j1_0 = norm * (lobe_b + lobe_a +
                   2.0 * overlap * std::cos(arg_density) +
                   2.0 * s2 / spec.k0 * overlap * (v1 - u1) * std::sin(arg_density));
  j.j2_0 = norm * (lobe_a + lobe_b +
                   2.0 * overlap * std::cos(arg_density) -
                   2.0 * s2 / spec.k0 * overlap * (v2 - u2) * std::sin(arg_density));
  j.j1_1 = norm * (lobe_a - lobe_b +
                   2.0 * s2 / spec.k0 * overlap * (v1 + u1) * std::sin(arg_current));
  j.j2_1 = norm * (lobe_b - lobe_a -
                   2.0 * s2 / spec.k0 * overlap * (v2 + u2) * std::sin(arg_current));
  return j;
}

}  // namespace refform

}  // namespace bhflow
