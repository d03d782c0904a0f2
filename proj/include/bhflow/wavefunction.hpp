#pragma once

#include <complex>

#include "bhflow/geometry.hpp"

namespace bhflow {

using Complex = std::complex<double>;

/// Gaussian wavepacket in momentum space: a superposition of an outgoing
/// component centred at +k0 (weight sqrt(alpha)) and an ingoing component
/// centred at -k0 (weight sqrt(1 - alpha)), both of bandwidth sigma.
struct WavepacketSpec {
  double k0 = 15.0;
  double sigma = 1.0;
  double alpha = 0.5;

  void validate() const;
  /// Narrowband regime k0/sigma >= 5 required for the plane-wave reduction.
  bool narrowband() const { return k0 >= 5.0 * sigma; }
  /// Fraction of a single packet's norm lying across k = 0.
  double negative_support_mass() const;
};

/// Both partial derivatives of the position-space wavefunction.
struct WaveGradient {
  Complex d_t;
  Complex d_rstar;
};

/// Momentum profile of one packet: sign = +1 outgoing, -1 ingoing.
/// f_pm(k) = (2 pi sigma^2)^(-1/4) exp(-(k -+ k0)^2 / 4 sigma^2).
double momentum_profile(double k, int sign, const WavepacketSpec& spec);

/// Closed-form position-space wavefunction in (t, r_star):
/// psi = (2 sigma^2/pi)^(1/4) [ sqrt(alpha) e^{-u (i k0 + u sigma^2)}
///                            + sqrt(1-alpha) e^{-v (i k0 + v sigma^2)} ],
/// u = t - r_star, v = t + r_star.
Complex psi_single(double t, double r_star, const WavepacketSpec& spec);

/// Analytic (d_t, d_rstar) of psi_single.
WaveGradient psi_single_gradient(double t, double r_star, const WavepacketSpec& spec);

/// Integrand weight for the quadrature amplitudes.
enum class Weight { Unit, Momentum, Energy };

struct QuadratureConfig {
  int nodes = 256;
  int max_refinements = 6;
  double rel_tol = 1e-10;
  double abs_tol = 1e-18;
  /// Packet support is truncated at k0 +- support_halfwidth * sigma.
  double support_halfwidth = 10.0;
};

/// Numeric oracle for the position-space amplitudes, independent of the
/// closed forms: (2 pi)^(-1/2) * Int dk f(k) w(k) e^{-i|k| t + i k r_star}
/// over the truncated supports of both packets, with w = 1, k or |k|.
/// Throws NonConvergenceError if node-doubling fails to settle.
Complex packet_integral(double t, double r_star, const WavepacketSpec& spec,
                        const QuadratureConfig& cfg, Weight weight);

/// packet_integral with unit weight: the wavefunction itself.
Complex psi_quadrature(double t, double r_star, const WavepacketSpec& spec,
                       const QuadratureConfig& cfg);

// -- Single-mode factors used by the two-photon state ----------------------
// Photon 1 rides the outgoing packet (argument u = t - r_star), photon 2 the
// ingoing one (v = t + r_star). The _momentum variants are the
// frequency-weighted integrals, equal to (k0 - 2 i w sigma^2) * mode.

Complex outgoing_mode(double t, double r_star, const WavepacketSpec& spec);
Complex ingoing_mode(double t, double r_star, const WavepacketSpec& spec);
Complex outgoing_mode_momentum(double t, double r_star, const WavepacketSpec& spec);
Complex ingoing_mode_momentum(double t, double r_star, const WavepacketSpec& spec);

/// Quadrature counterpart of the mode factors:
/// (2 pi)^(-1/2) * Int dk {1, k} f_+(k) e^{-i k u} dk with u the mode argument.
Complex mode_integral_quadrature(double u, const WavepacketSpec& spec,
                                 const QuadratureConfig& cfg, Weight weight);

/// Pair of events, one per photon, each with its own time coordinate.
struct TwoPhotonEvent {
  RadialEvent r1;
  RadialEvent r2;
};

/// Exchange-symmetrised two-photon wavefunction
/// (psi1(R1) psi2(R2) + psi1(R2) psi2(R1)) / sqrt(2).
Complex two_photon_psi(const TwoPhotonEvent& ev, const WavepacketSpec& spec);

/// Mode factors evaluated at one event.
struct ModeValues {
  Complex out;
  Complex in;
  Complex out_k;
  Complex in_k;
};

struct TwoPhotonComponents {
  ModeValues at1;
  ModeValues at2;
};

TwoPhotonComponents two_photon_components(const TwoPhotonEvent& ev,
                                          const WavepacketSpec& spec);

TwoPhotonComponents two_photon_components_quadrature(const TwoPhotonEvent& ev,
                                                     const WavepacketSpec& spec,
                                                     const QuadratureConfig& cfg);

}  // namespace bhflow
