#include "bhflow/wavefunction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bhflow/errors.hpp"
#include "bhflow/quadrature.hpp"

namespace bhflow {

namespace {

constexpr Complex kImag{0.0, 1.0};

double envelope_norm(const WavepacketSpec& spec) {
  // (2 sigma^2 / pi)^{1/4}
  return std::pow(2.0 * spec.sigma * spec.sigma / M_PI, 0.25);
}

/// One Gaussian mode factor C * exp(-w (i k0 + w sigma^2)).
Complex mode_factor(double w, const WavepacketSpec& spec) {
  const double s2 = spec.sigma * spec.sigma;
  return envelope_norm(spec) *
         std::exp(Complex(-w * w * s2, -spec.k0 * w));
}

/// Derivative factor d/dw of the mode exponent: -(i k0 + 2 w sigma^2).
Complex mode_derivative_factor(double w, const WavepacketSpec& spec) {
  return Complex(-2.0 * w * spec.sigma * spec.sigma, -spec.k0);
}

/// Value of one refinement stage together with the L1 mass of its summands;
/// the latter sets the rounding floor when the integral cancels to ~0.
struct StageResult {
  Complex value{};
  double l1 = 0.0;
};

/// Adaptive node-doubling wrapper around a complex Gauss-Legendre integral.
template <typename F>
Complex converge(F&& eval, const QuadratureConfig& cfg) {
  int n = cfg.nodes;
  StageResult prev = eval(n);
  for (int i = 0; i < cfg.max_refinements; ++i) {
    n *= 2;
    const StageResult next = eval(n);
    const double delta = std::abs(next.value - prev.value);
    const double rounding_floor =
        16.0 * std::numeric_limits<double>::epsilon() * next.l1;
    if (delta <= cfg.rel_tol * std::abs(next.value) + rounding_floor + cfg.abs_tol) {
      return next.value;
    }
    prev = next;
  }
  throw NonConvergenceError(
      "packet quadrature did not converge after " +
      std::to_string(cfg.max_refinements) + " refinements (last n = " +
      std::to_string(n) + ")");
}

/// Gauss-Legendre integral of a complex integrand, also accumulating the L1
/// norm of the weighted samples.
template <typename F>
StageResult integrate_with_l1(F&& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  StageResult out;
  for (int i = 0; i < n; ++i) {
    const Complex term = rule.weights[i] * f(mid + half * rule.nodes[i]);
    out.value += term;
    out.l1 += std::abs(term);
  }
  out.value *= half;
  out.l1 *= std::abs(half);
  return out;
}

double weight_value(Weight weight, double k) {
  switch (weight) {
    case Weight::Unit: return 1.0;
    case Weight::Momentum: return k;
    case Weight::Energy: return std::abs(k);
  }
  return 0.0;
}

/// Integral of f_pm(k) w(k) e^{-i|k|t + i k r_star} over [a, b], split at
/// k = 0 where the dispersion |k| has a kink.
StageResult packet_piece(double a, double b, double t, double r_star, int sign,
                         Weight weight, const WavepacketSpec& spec, int n) {
  auto integrand = [&](double k) {
    const double phase_t = -std::abs(k) * t;
    return momentum_profile(k, sign, spec) * weight_value(weight, k) *
           std::exp(Complex(0.0, phase_t + k * r_star));
  };
  if (a < 0.0 && b > 0.0) {
    const StageResult lo = integrate_with_l1(integrand, a, 0.0, n);
    const StageResult hi = integrate_with_l1(integrand, 0.0, b, n);
    return StageResult{lo.value + hi.value, lo.l1 + hi.l1};
  }
  return integrate_with_l1(integrand, a, b, n);
}

}  // namespace

void WavepacketSpec::validate() const {
  if (!(k0 > 0.0) || !std::isfinite(k0)) {
    throw std::invalid_argument("WavepacketSpec: k0 must be finite and > 0");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("WavepacketSpec: sigma must be finite and > 0");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("WavepacketSpec: alpha must lie in [0, 1]");
  }
}

double WavepacketSpec::negative_support_mass() const {
  // Int_{-inf}^{0} |f_+|^2 dk for a unit-norm packet centred at k0.
  return 0.5 * std::erfc(k0 / (sigma * std::sqrt(2.0)));
}

double momentum_profile(double k, int sign, const WavepacketSpec& spec) {
  const double centred = k - sign * spec.k0;
  const double s2 = spec.sigma * spec.sigma;
  return std::pow(2.0 * M_PI * s2, -0.25) *
         std::exp(-centred * centred / (4.0 * s2));
}

Complex psi_single(double t, double r_star, const WavepacketSpec& spec) {
  const double u = t - r_star;
  const double v = t + r_star;
  return std::sqrt(spec.alpha) * mode_factor(u, spec) +
         std::sqrt(1.0 - spec.alpha) * mode_factor(v, spec);
}

WaveGradient psi_single_gradient(double t, double r_star,
                                 const WavepacketSpec& spec) {
  const double u = t - r_star;
  const double v = t + r_star;
  const Complex term_out = std::sqrt(spec.alpha) * mode_factor(u, spec);
  const Complex term_in = std::sqrt(1.0 - spec.alpha) * mode_factor(v, spec);
  const Complex au = mode_derivative_factor(u, spec);
  const Complex av = mode_derivative_factor(v, spec);
  WaveGradient grad;
  grad.d_t = au * term_out + av * term_in;          // du/dt = dv/dt = 1
  grad.d_rstar = -au * term_out + av * term_in;     // du/dr* = -1, dv/dr* = +1
  return grad;
}

Complex packet_integral(double t, double r_star, const WavepacketSpec& spec,
                        const QuadratureConfig& cfg, Weight weight) {
  const double halfwidth = cfg.support_halfwidth * spec.sigma;
  const double root_alpha = std::sqrt(spec.alpha);
  const double root_beta = std::sqrt(1.0 - spec.alpha);
  const double norm = 1.0 / std::sqrt(2.0 * M_PI);
  auto eval = [&](int n) {
    StageResult acc;
    if (root_alpha != 0.0) {
      const StageResult out = packet_piece(spec.k0 - halfwidth, spec.k0 + halfwidth,
                                           t, r_star, +1, weight, spec, n);
      acc.value += root_alpha * out.value;
      acc.l1 += root_alpha * out.l1;
    }
    if (root_beta != 0.0) {
      const StageResult in = packet_piece(-spec.k0 - halfwidth, -spec.k0 + halfwidth,
                                          t, r_star, -1, weight, spec, n);
      acc.value += root_beta * in.value;
      acc.l1 += root_beta * in.l1;
    }
    acc.value *= norm;
    acc.l1 *= norm;
    return acc;
  };
  return converge(eval, cfg);
}

Complex psi_quadrature(double t, double r_star, const WavepacketSpec& spec,
                       const QuadratureConfig& cfg) {
  return packet_integral(t, r_star, spec, cfg, Weight::Unit);
}

Complex outgoing_mode(double t, double r_star, const WavepacketSpec& spec) {
  return mode_factor(t - r_star, spec);
}

Complex ingoing_mode(double t, double r_star, const WavepacketSpec& spec) {
  return mode_factor(t + r_star, spec);
}

Complex outgoing_mode_momentum(double t, double r_star,
                               const WavepacketSpec& spec) {
  const double u = t - r_star;
  return kImag * mode_derivative_factor(u, spec) * mode_factor(u, spec);
}

Complex ingoing_mode_momentum(double t, double r_star,
                              const WavepacketSpec& spec) {
  const double v = t + r_star;
  return kImag * mode_derivative_factor(v, spec) * mode_factor(v, spec);
}

Complex mode_integral_quadrature(double u, const WavepacketSpec& spec,
                                 const QuadratureConfig& cfg, Weight weight) {
  const double halfwidth = cfg.support_halfwidth * spec.sigma;
  const double norm = 1.0 / std::sqrt(2.0 * M_PI);
  auto eval = [&](int n) {
    auto integrand = [&](double k) {
      return momentum_profile(k, +1, spec) * weight_value(weight, k) *
             std::exp(Complex(0.0, -k * u));
    };
    StageResult out = integrate_with_l1(integrand, spec.k0 - halfwidth,
                                        spec.k0 + halfwidth, n);
    out.value *= norm;
    out.l1 *= norm;
    return out;
  };
  return converge(eval, cfg);
}

Complex two_photon_psi(const TwoPhotonEvent& ev, const WavepacketSpec& spec) {
  const Complex t1 = outgoing_mode(ev.r1.t, ev.r1.r_star, spec) *
                     ingoing_mode(ev.r2.t, ev.r2.r_star, spec);
  const Complex t2 = outgoing_mode(ev.r2.t, ev.r2.r_star, spec) *
                     ingoing_mode(ev.r1.t, ev.r1.r_star, spec);
  return (t1 + t2) / std::sqrt(2.0);
}

TwoPhotonComponents two_photon_components(const TwoPhotonEvent& ev,
                                          const WavepacketSpec& spec) {
  auto at = [&](const RadialEvent& e) {
    return ModeValues{outgoing_mode(e.t, e.r_star, spec),
                      ingoing_mode(e.t, e.r_star, spec),
                      outgoing_mode_momentum(e.t, e.r_star, spec),
                      ingoing_mode_momentum(e.t, e.r_star, spec)};
  };
  return TwoPhotonComponents{at(ev.r1), at(ev.r2)};
}

TwoPhotonComponents two_photon_components_quadrature(
    const TwoPhotonEvent& ev, const WavepacketSpec& spec,
    const QuadratureConfig& cfg) {
  auto at = [&](const RadialEvent& e) {
    const double u = e.t - e.r_star;
    const double v = e.t + e.r_star;
    return ModeValues{
        mode_integral_quadrature(u, spec, cfg, Weight::Unit),
        mode_integral_quadrature(v, spec, cfg, Weight::Unit),
        mode_integral_quadrature(u, spec, cfg, Weight::Momentum),
        mode_integral_quadrature(v, spec, cfg, Weight::Momentum)};
  };
  return TwoPhotonComponents{at(ev.r1), at(ev.r2)};
}

}  // namespace bhflow
