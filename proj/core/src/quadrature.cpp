#include "sbrel/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sbrel/errors.hpp"
#include "sbrel/stats.hpp"

namespace sbrel {
namespace {

void check_count(std::size_t n) {
  if (n < NormalRule::kMinNodes) {
    throw ParameterError("quadrature needs at least " + std::to_string(NormalRule::kMinNodes) +
                         " nodes, got " + std::to_string(n));
  }
}

void normalize(std::vector<double>& w) {
  const double total = pairwise_sum(w);
  for (double& x : w) x /= total;
}

}  // namespace

NormalRule::NormalRule(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  normalize(weights_);
}

NormalRule NormalRule::grid(std::size_t n) {
  check_count(n);
  std::vector<double> z(n);
  std::vector<double> w(n);
  const double h = 2.0 * kHalfWidth / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = -kHalfWidth + h * static_cast<double>(k);
    w[k] = std::exp(-0.5 * z[k] * z[k]);
  }
  if (n % 2 == 1) z[n / 2] = 0.0;
  return NormalRule(std::move(z), std::move(w));
}

NormalRule NormalRule::focused(double center, double scale) const {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(center)) {
    throw ParameterError("focused rule needs finite center and positive scale");
  }
  const std::size_t n = size();
  // Cover [-kHalfWidth, kHalfWidth] in z whatever the center.
  const double t_max = std::asinh((kHalfWidth + std::abs(center)) / scale);
  const double h = 2.0 * t_max / static_cast<double>(n - 1);
  std::vector<double> z(n);
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = -t_max + h * static_cast<double>(k);
    z[k] = center + scale * std::sinh(t);
    w[k] = std::exp(-0.5 * z[k] * z[k]) * scale * std::cosh(t);
  }
  return NormalRule(std::move(z), std::move(w));
}

}  // namespace sbrel
