#pragma once

#include <vector>

namespace bhflow {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending. Rules are cached per n
/// behind a mutex, so lookups are safe from any thread.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int n);

/// Integrate a callable returning T over [a, b] with an n-point rule.
template <typename T, typename F>
T gauss_legendre_integrate(F&& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T acc{};
  for (int i = 0; i < n; ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

}  // namespace bhflow
