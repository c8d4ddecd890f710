#pragma once

#include <utility>
#include <vector>

namespace delaudit {

// Parameter arithmetic for (eps, delta)-indistinguishability.

// Conditioning on a shared coordinate: (eps, delta) joint closeness yields
// (3*eps, delta')-closeness of the conditionals except with probability
// gamma = 2*delta/delta' + 2*delta/(1 - e^{-eps}). Throws on eps == 0.
std::pair<double, double> conditioning_params(double eps, double delta, double delta_prime);

// Group privacy: (k*eps, delta*(e^{k*eps}-1)/(e^{eps}-1)); the ratio tends to
// k as eps -> 0.
std::pair<double, double> group_privacy_params(double eps, double delta, int k);

// Basic composition: componentwise sums.
std::pair<double, double> compose_params(const std::vector<std::pair<double, double>>& terms);

// Adaptive-unlearning parameters from approximate history independence:
// alpha = 3*eps, gamma = 2*delta/beta + 2*delta/(1 - e^{-eps}).
std::pair<double, double> unlearning_params(double eps, double delta, double beta);

}  // namespace delaudit
