#pragma once

// Embedded Dormand-Prince 5(4) pair with the standard quartic dense-output
// interpolant, adapted from Hairer, Norsett & Wanner's DOPRI5.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bhflow/errors.hpp"

namespace bhflow::ode {

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double safety = 0.9;
  double shrink_limit = 0.2;
  double grow_limit = 5.0;
  long max_steps = 2'000'000;
  int max_node_bisections = 40;
};

template <std::size_t N>
using State = std::array<double, N>;

/// Right-hand side callback; may throw NodeProximityError, which the driver
/// treats as a request to bisect the step.
template <std::size_t N>
using Rhs = std::function<State<N>(double, const State<N>&)>;

enum class StopReason { Completed, NodeAborted, StepLimit };

template <std::size_t N>
struct Result {
  std::vector<double> t;
  std::vector<State<N>> y;
  StopReason reason = StopReason::Completed;
  double t_reached = 0.0;
  long n_steps = 0;
  long n_rejected = 0;
  long n_rhs = 0;
  std::string note;
};

namespace detail {

// Butcher tableau (Dormand & Prince 1980).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus 4th-order weights (error estimator).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output quartic.
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;

}  // namespace detail

/// Dense interpolant over one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0, h = 0.0;
  std::array<State<N>, 5> cont{};

  State<N> eval(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = cont[0][i] +
               s * (cont[1][i] +
                    s1 * (cont[2][i] + s * (cont[3][i] + s1 * cont[4][i])));
    }
    return out;
  }
};

/// Integrate y' = rhs(t, y) from t0 to t1 (t1 > t0), sampling the dense
/// interpolant at the requested times. sample_times must be ascending and
/// within [t0, t1]. If the RHS keeps throwing NodeProximityError after
/// max_node_bisections halvings, integration stops with NodeAborted and the
/// samples collected so far are kept.
template <std::size_t N>
Result<N> integrate(const Rhs<N>& rhs, double t0, double t1, const State<N>& y0,
                    const std::vector<double>& sample_times,
                    const StepControl& ctrl = {}) {
  using namespace detail;
  Result<N> res;
  res.t.reserve(sample_times.size());
  res.y.reserve(sample_times.size());

  auto scaled_err = [&](const State<N>& y, const State<N>& ynew,
                        const State<N>& err) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc =
          ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double q = err[i] / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(N));
  };

  double t = t0;
  State<N> y = y0;
  std::size_t next_sample = 0;

  // Emit samples that coincide with the start point.
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    res.t.push_back(sample_times[next_sample]);
    res.y.push_back(y0);
    ++next_sample;
  }

  State<N> k1{};
  bool have_k1 = false;
  double h = (t1 - t0) * 1e-4;

  const double h_floor = std::max((t1 - t0), 1.0) * 1e-14;

  while (t < t1) {
    if (++res.n_steps > ctrl.max_steps) {
      res.reason = StopReason::StepLimit;
      res.t_reached = t;
      res.note = "step limit exceeded";
      return res;
    }
    h = std::min(h, t1 - t);

    int bisections = 0;
    bool accepted = false;
    State<N> ynew{}, k7{};
    DenseSegment<N> seg;

    while (!accepted) {
      try {
        if (!have_k1) {
          k1 = rhs(t, y);
          ++res.n_rhs;
          have_k1 = true;
        }
        State<N> w{};
        for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * a21 * k1[i];
        const State<N> k2 = rhs(t + c2 * h, w);
        for (std::size_t i = 0; i < N; ++i)
          w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State<N> k3 = rhs(t + c3 * h, w);
        for (std::size_t i = 0; i < N; ++i)
          w[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State<N> k4 = rhs(t + c4 * h, w);
        for (std::size_t i = 0; i < N; ++i)
          w[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State<N> k5 = rhs(t + c5 * h, w);
        for (std::size_t i = 0; i < N; ++i)
          w[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
        const State<N> k6 = rhs(t + h, w);
        for (std::size_t i = 0; i < N; ++i)
          ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
        k7 = rhs(t + h, ynew);  // FSAL
        res.n_rhs += 6;

        State<N> err{};
        for (std::size_t i = 0; i < N; ++i)
          err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                        e6 * k6[i] + e7 * k7[i]);
        const double errn = scaled_err(y, ynew, err);

        if (errn <= 1.0) {
          accepted = true;
          seg.t0 = t;
          seg.h = h;
          for (std::size_t i = 0; i < N; ++i) {
            const double dy = ynew[i] - y[i];
            seg.cont[0][i] = y[i];
            seg.cont[1][i] = dy;
            seg.cont[2][i] = h * k1[i] - dy;
            seg.cont[3][i] = dy - h * k7[i] - seg.cont[2][i];
            seg.cont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                  d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
          }
          const double factor = std::clamp(
              ctrl.safety * std::pow(errn, -0.2), ctrl.shrink_limit, ctrl.grow_limit);
          const double h_done = h;
          h = h * factor;

          const double t_new = t + h_done;
          while (next_sample < sample_times.size() &&
                 sample_times[next_sample] <= t_new + 1e-14 * std::abs(t_new)) {
            const double ts = std::min(sample_times[next_sample], t_new);
            res.t.push_back(sample_times[next_sample]);
            res.y.push_back(seg.eval(ts));
            ++next_sample;
          }
          t = t_new;
          y = ynew;
          k1 = k7;  // FSAL reuse
        } else {
          ++res.n_rejected;
          h *= std::clamp(ctrl.safety * std::pow(errn, -0.2), ctrl.shrink_limit, 1.0);
          if (h < h_floor) {
            res.reason = StopReason::StepLimit;
            res.t_reached = t;
            res.note = "step size underflow";
            return res;
          }
        }
      } catch (const NodeProximityError& e) {
        have_k1 = false;  // k1 may predate the node contact
        if (++bisections > ctrl.max_node_bisections || h * 0.5 < h_floor) {
          res.reason = StopReason::NodeAborted;
          res.t_reached = t;
          res.note = e.what();
          return res;
        }
        h *= 0.5;
      }
    }
  }

  res.reason = StopReason::Completed;
  res.t_reached = t1;
  return res;
}

}  // namespace bhflow::ode
