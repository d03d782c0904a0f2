#include "bhflow/weakvalues.hpp"

#include <cmath>
#include <stdexcept>

#include "bhflow/errors.hpp"

namespace bhflow {

WeakValuePair WeakValueAmplitudes::weak_values(double probability_floor) const {
  const double prob = probability();
  if (prob < probability_floor) {
    throw NodeProximityError("weak value undefined: post-selection probability below floor",
                             prob, probability_floor);
  }
  return WeakValuePair{std::real(std::conj(postselection) * p_num) / prob,
                       std::real(std::conj(postselection) * h_num) / prob};
}

WeakValueAmplitudes weak_single_amplitudes(double t, double r_star,
                                           const WavepacketSpec& spec,
                                           const QuadratureConfig& cfg) {
  return WeakValueAmplitudes{
      packet_integral(t, r_star, spec, cfg, Weight::Unit),
      packet_integral(t, r_star, spec, cfg, Weight::Momentum),
      packet_integral(t, r_star, spec, cfg, Weight::Energy)};
}

WeakValuePair weak_single(double t, double r_star, const WavepacketSpec& spec,
                          const QuadratureConfig& cfg, double probability_floor) {
  return weak_single_amplitudes(t, r_star, spec, cfg).weak_values(probability_floor);
}

double weak_velocity_single(double t, double r, const SpacetimeParams& params,
                            const WavepacketSpec& spec, const QuadratureConfig& cfg,
                            double probability_floor) {
  const double f = metric_function(r, params);
  const double r_star = tortoise_from_radial(r, params);
  const WeakValuePair w = weak_single(t, r_star, spec, cfg, probability_floor);
  return f * w.ratio();
}

TwoPhotonWeakValues combine_two_photon_components(const TwoPhotonComponents& c) {
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  const Complex post =
      (c.at1.out * c.at2.in + c.at2.out * c.at1.in) * inv_rt2;

  TwoPhotonWeakValues w;
  w.detector_a.postselection = post;
  w.detector_a.p_num = (c.at1.out_k * c.at2.in - c.at2.out * c.at1.in_k) * inv_rt2;
  w.detector_a.h_num = (c.at1.out_k * c.at2.in + c.at2.out * c.at1.in_k) * inv_rt2;

  w.detector_b.postselection = post;
  w.detector_b.p_num = (c.at2.out_k * c.at1.in - c.at1.out * c.at2.in_k) * inv_rt2;
  w.detector_b.h_num = (c.at1.out * c.at2.in_k + c.at2.out_k * c.at1.in) * inv_rt2;
  return w;
}

TwoPhotonWeakValues weak_two(const TwoPhotonEvent& ev, const WavepacketSpec& spec) {
  if (ev.r1.t != ev.r2.t) {
    throw std::invalid_argument("weak_two: detectors must share a timeslice");
  }
  return combine_two_photon_components(two_photon_components(ev, spec));
}

TwoPhotonWeakValues weak_two_quadrature(const TwoPhotonEvent& ev,
                                        const WavepacketSpec& spec,
                                        const QuadratureConfig& cfg) {
  if (ev.r1.t != ev.r2.t) {
    throw std::invalid_argument("weak_two_quadrature: detectors must share a timeslice");
  }
  return combine_two_photon_components(
      two_photon_components_quadrature(ev, spec, cfg));
}

PostselectionSpec PostselectionSpec::single(double r_star) {
  PostselectionSpec p;
  p.kind = Kind::SinglePosition;
  p.r_star = r_star;
  return p;
}

PostselectionSpec PostselectionSpec::coincidence(double r1_star, double r2_star) {
  PostselectionSpec p;
  p.kind = Kind::TwoPhotonCoincidence;
  p.r1_star = r1_star;
  p.r2_star = r2_star;
  return p;
}

WeakValuePair weak_single(double t, const PostselectionSpec& post,
                          const WavepacketSpec& spec, const QuadratureConfig& cfg,
                          double probability_floor) {
  if (post.kind != PostselectionSpec::Kind::SinglePosition) {
    throw std::invalid_argument("weak_single: post-selection is not single-position");
  }
  return weak_single(t, post.r_star, spec, cfg, probability_floor);
}

TwoPhotonWeakValues weak_two(double t, const PostselectionSpec& post,
                             const WavepacketSpec& spec) {
  if (post.kind != PostselectionSpec::Kind::TwoPhotonCoincidence) {
    throw std::invalid_argument("weak_two: post-selection is not a coincidence");
  }
  return weak_two(TwoPhotonEvent{RadialEvent{t, 0.0, post.r1_star},
                                 RadialEvent{t, 0.0, post.r2_star}},
                  spec);
}

}  // namespace bhflow
