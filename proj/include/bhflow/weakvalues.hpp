#pragma once

#include "bhflow/currents.hpp"
#include "bhflow/wavefunction.hpp"

namespace bhflow {

/// Position post-selection: either a single tortoise coordinate or a
/// two-detector coincidence on a common timeslice.
struct PostselectionSpec {
  enum class Kind { SinglePosition, TwoPhotonCoincidence };
  Kind kind = Kind::SinglePosition;
  double r_star = 0.0;       // SinglePosition
  double r1_star = 0.0;      // TwoPhotonCoincidence
  double r2_star = 0.0;

  static PostselectionSpec single(double r_star);
  static PostselectionSpec coincidence(double r1_star, double r2_star);
};

/// Weak momentum and energy with position post-selection.
struct WeakValuePair {
  double p_w = 0.0;
  double h_w = 0.0;

  double ratio() const { return p_w / h_w; }
};

/// Raw post-selected amplitudes. The *_product() forms
/// 2 Re(<psi|phi><phi|A|psi>) are finite at nodes and reproduce the
/// conserved-current components; the weak values divide by the
/// post-selection probability.
struct WeakValueAmplitudes {
  Complex postselection;  // <phi|psi>
  Complex p_num;          // <phi|p|psi>
  Complex h_num;          // <phi|H|psi>

  double probability() const { return std::norm(postselection); }
  double p_product() const {
    return 2.0 * std::real(std::conj(postselection) * p_num);
  }
  double h_product() const {
    return 2.0 * std::real(std::conj(postselection) * h_num);
  }
  /// Throws NodeProximityError if the post-selection probability is below
  /// the floor (probability units: |psi|^2).
  WeakValuePair weak_values(double probability_floor) const;
};

/// Single-photon amplitudes by momentum-space quadrature: the operational
/// route, independent of the closed-form wavefunction.
WeakValueAmplitudes weak_single_amplitudes(double t, double r_star,
                                           const WavepacketSpec& spec,
                                           const QuadratureConfig& cfg);

WeakValuePair weak_single(double t, double r_star, const WavepacketSpec& spec,
                          const QuadratureConfig& cfg, double probability_floor);

/// Velocity through the weak-value route: f(r) * p_w / h_w.
double weak_velocity_single(double t, double r, const SpacetimeParams& params,
                            const WavepacketSpec& spec, const QuadratureConfig& cfg,
                            double probability_floor);

/// Per-detector amplitudes of the coincidence-post-selected two-photon state.
struct TwoPhotonWeakValues {
  WeakValueAmplitudes detector_a;
  WeakValueAmplitudes detector_b;

  /// Current components implied by the product forms; at equal times these
  /// coincide with two_photon_currents.
  TwoPhotonCurrents currents() const {
    return TwoPhotonCurrents{detector_a.h_product(), detector_a.p_product(),
                             detector_b.h_product(), detector_b.p_product()};
  }
};

/// Two-photon weak values from the symmetrised detector operators; both
/// events must share a common time coordinate. Components come from the
/// closed-form mode factors.
TwoPhotonWeakValues weak_two(const TwoPhotonEvent& ev, const WavepacketSpec& spec);

/// Same combination law, but every mode factor is evaluated by quadrature.
TwoPhotonWeakValues weak_two_quadrature(const TwoPhotonEvent& ev,
                                        const WavepacketSpec& spec,
                                        const QuadratureConfig& cfg);

/// Assembles detector amplitudes from precomputed mode factors.
TwoPhotonWeakValues combine_two_photon_components(const TwoPhotonComponents& c);

/// Post-selection-driven entry points at time t.
WeakValuePair weak_single(double t, const PostselectionSpec& post,
                          const WavepacketSpec& spec, const QuadratureConfig& cfg,
                          double probability_floor);
TwoPhotonWeakValues weak_two(double t, const PostselectionSpec& post,
                             const WavepacketSpec& spec);

}  // namespace bhflow
