#include "bhflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bhflow {

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& model_cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = model_cdf(samples[i]);
    d = std::max(d, std::abs((i + 1.0) / n - c));
    d = std::max(d, std::abs(static_cast<double>(i) / n - c));
  }
  return d;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("two_sample_ks: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace bhflow
