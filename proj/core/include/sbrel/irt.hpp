#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sbrel/quadrature.hpp"

namespace sbrel {

/// Logistic scaling constant of the 2PL model.
struct ModelConstants {
  double D = 1.7;
};

/// One 2PL item loading on a single latent dimension (1-based).
struct ItemParams {
  double a = 1.0;
  double b = 0.0;
  int dim = 1;

  friend bool operator==(const ItemParams&, const ItemParams&) = default;
};

/// Latent space: `num_dimensions` independent standard-normal traits.
struct LatentSpec {
  int num_dimensions = 1;
};

/// Per-item moments of the binary score X, its true score T = P(theta) and
/// error E = X - T.
struct ItemMoments {
  double mu = 0.0;        // E X
  double tau_sq = 0.0;    // var T
  double eps_sq = 0.0;    // E var(X | theta) = E[P (1 - P)]
  double sigma_sq = 0.0;  // var X = mu (1 - mu)
};

/// Finite item universe. Immutable once built; validation on construction.
class ItemPool {
 public:
  /// Throws ParameterError on an empty pool, a <= 0, non-finite values or a
  /// dimension outside [1, latent.num_dimensions].
  ItemPool(LatentSpec latent, std::vector<ItemParams> items);

  const LatentSpec& latent() const noexcept { return latent_; }
  int num_dimensions() const noexcept { return latent_.num_dimensions; }
  std::size_t size() const noexcept { return items_.size(); }
  const ItemParams& operator[](std::size_t i) const { return items_[i]; }
  std::span<const ItemParams> items() const noexcept { return items_; }

 private:
  LatentSpec latent_;
  std::vector<ItemParams> items_;
};

/// P(X = 1 | theta) = 1 / (1 + exp(-D a (theta - b))).
double irf(const ItemParams& item, double theta, const ModelConstants& c = {});

/// Moments by quadrature with `rule`'s node count focused on the item's
/// difficulty. Throws QuadratureError if mu(1 - mu) and tau_sq + eps_sq
/// disagree by more than 1e-8.
ItemMoments item_moments(const ItemParams& item, const NormalRule& rule,
                         const ModelConstants& c = {});

/// cov(T_i, T_j). Zero across dimensions; tau_sq when both arguments are the
/// same item; otherwise a one-dimensional integral on `rule`.
double true_score_cov(const ItemParams& i, const ItemParams& j, const NormalRule& rule,
                      const ModelConstants& c = {});

}  // namespace sbrel
