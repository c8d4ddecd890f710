#include "delaudit/dp_params.hpp"

#include <cmath>

#include "delaudit/errors.hpp"

namespace delaudit {

std::pair<double, double> conditioning_params(double eps, double delta, double delta_prime) {
  if (eps <= 0) throw DegenerateParameterError("conditioning_params requires eps > 0");
  if (delta_prime <= 0) throw DegenerateParameterError("conditioning_params requires delta' > 0");
  double gamma = 2 * delta / delta_prime + 2 * delta / (1 - std::exp(-eps));
  return {3 * eps, gamma};
}

std::pair<double, double> group_privacy_params(double eps, double delta, int k) {
  if (k < 1) throw ParameterError("group size must be >= 1");
  if (eps == 0) return {0.0, delta * k};  // limit of (e^{k*eps}-1)/(e^{eps}-1)
  double ratio = std::expm1(k * eps) / std::expm1(eps);
  return {k * eps, delta * ratio};
}

std::pair<double, double> compose_params(const std::vector<std::pair<double, double>>& terms) {
  double eps = 0, delta = 0;
  for (const auto& [e, d] : terms) {
    if (e < 0 || d < 0) throw ParameterError("composition terms must be nonnegative");
    eps += e;
    delta += d;
  }
  return {eps, delta};
}

std::pair<double, double> unlearning_params(double eps, double delta, double beta) {
  if (eps <= 0) throw DegenerateParameterError("unlearning_params requires eps > 0");
  if (beta <= 0) throw DegenerateParameterError("unlearning_params requires beta > 0");
  double gamma = 2 * delta / beta + 2 * delta / (1 - std::exp(-eps));
  return {3 * eps, gamma};
}

}  // namespace delaudit
