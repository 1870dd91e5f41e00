#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sbrel {

/// Quadrature rule for expectations over a standard normal variable:
/// E[g(Z)] ~= sum_k weights[k] * g(nodes[k]), with the weights summing to 1.
///
/// Two constructions share one node budget:
///
///  * grid(n): n equally spaced nodes on [-half_width, half_width] with
///    normal-density weights (truncated trapezoid). One fixed rule for every
///    integrand, which is what multi-item integrals need. The trapezoid is
///    geometrically convergent for integrands analytic in a strip around the
///    real axis; a logistic IRF with slope D*a has poles pi/(D*a) away, so
///    steep items want more nodes (201 nodes give ~1e-11 at D*a = 8.5).
///
///  * focused(center, scale): the same number of nodes placed by the map
///    z = center + scale*sinh(t), t uniform. Nodes crowd within ~scale of
///    `center`, which turns a nearby pole into a far one in t. Used for
///    single-item integrals, centered on the item difficulty; 61 nodes reach
///    ~1e-13 for D*a up to 8.5.
class NormalRule {
 public:
  static constexpr std::size_t kMinNodes = 21;
  static constexpr std::size_t kDefaultNodes = 401;
  static constexpr double kHalfWidth = 9.0;

  /// Uniform grid rule. Throws ParameterError when n < kMinNodes.
  static NormalRule grid(std::size_t n = kDefaultNodes);

  /// Rule with this rule's node count focused around `center`.
  /// `scale` must be positive.
  NormalRule focused(double center, double scale) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  template <class F>
  double expect(F&& g) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) s += weights_[k] * g(nodes_[k]);
    return s;
  }

 private:
  NormalRule(std::vector<double> nodes, std::vector<double> weights);

  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace sbrel
