#include "sbrel/irt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbrel/errors.hpp"

namespace sbrel {
namespace {

double logistic(double x) {
  // Evaluate on the side that cannot overflow.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

ItemPool::ItemPool(LatentSpec latent, std::vector<ItemParams> items)
    : latent_(latent), items_(std::move(items)) {
  if (latent_.num_dimensions < 1) throw ParameterError("latent space needs at least one dimension");
  if (items_.empty()) throw ParameterError("item pool is empty");
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const ItemParams& it = items_[i];
    if (!std::isfinite(it.a) || !std::isfinite(it.b) || !(it.a > 0.0)) {
      throw ParameterError("item " + std::to_string(i) + ": need finite a > 0 and finite b");
    }
    if (it.dim < 1 || it.dim > latent_.num_dimensions) {
      throw ParameterError("item " + std::to_string(i) + ": dimension " + std::to_string(it.dim) +
                           " outside 1.." + std::to_string(latent_.num_dimensions));
    }
  }
}

double irf(const ItemParams& item, double theta, const ModelConstants& c) {
  return logistic(c.D * item.a * (theta - item.b));
}

ItemMoments item_moments(const ItemParams& item, const NormalRule& rule, const ModelConstants& c) {
  // Poles of the IRF lie pi/(D a) off the real axis at Re = b.
  const double slope = c.D * item.a;
  const double scale = std::min(1.0, std::numbers::pi / slope);
  const NormalRule local = rule.focused(item.b, scale);

  const auto z = local.nodes();
  const auto w = local.weights();
  double mu = 0.0;
  double eps = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double x = slope * (z[k] - item.b);
    const double p = logistic(x);
    mu += w[k] * p;
    eps += w[k] * p * logistic(-x);
  }
  double tau = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double d = logistic(slope * (z[k] - item.b)) - mu;
    tau += w[k] * d * d;
  }

  ItemMoments m{mu, tau, eps, mu * (1.0 - mu)};
  if (std::abs(m.sigma_sq - (m.tau_sq + m.eps_sq)) > 1e-8) {
    throw QuadratureError("item (a=" + std::to_string(item.a) + ", b=" + std::to_string(item.b) +
                          "): var X and var T + E eps^2 disagree");
  }
  return m;
}

double true_score_cov(const ItemParams& i, const ItemParams& j, const NormalRule& rule,
                      const ModelConstants& c) {
  if (i.dim != j.dim) return 0.0;
  if (i == j) return item_moments(i, rule, c).tau_sq;
  const double mi = rule.expect([&](double z) { return irf(i, z, c); });
  const double mj = rule.expect([&](double z) { return irf(j, z, c); });
  return rule.expect([&](double z) { return (irf(i, z, c) - mi) * (irf(j, z, c) - mj); });
}

}  // namespace sbrel
