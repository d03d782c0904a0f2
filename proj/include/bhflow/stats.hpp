#pragma once

#include <functional>
#include <vector>

namespace bhflow {

/// Kolmogorov-Smirnov distance between an empirical sample and a model CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& model_cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double two_sample_ks(std::vector<double> a, std::vector<double> b);

}  // namespace bhflow
