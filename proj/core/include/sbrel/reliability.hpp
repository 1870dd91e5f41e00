#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sbrel/irt.hpp"
#include "sbrel/quadrature.hpp"
#include "sbrel/test_form.hpp"

namespace sbrel {

/// Reliability of one fixed form, with scores taken as item means.
struct FormReliability {
  std::size_t n = 0;
  double true_var = 0.0;     // var(T_S | S)
  double err_var = 0.0;      // var(E_S | S) = mean_eps_sq / n
  double mean_eps_sq = 0.0;  // (1/n) sum eps^2(R_i)
  double rho = 0.0;          // true_var / (true_var + err_var)
  double rescaled = 0.0;     // sb(rho, 1/n)
};

/// Long-test limit of the rescaled reliability for a pool.
struct PoolLimit {
  double universe_var = 0.0;  // var(T_inf)
  double mean_eps_sq = 0.0;   // E eps^2(R_1)
  double limit = 0.0;         // universe_var / (universe_var + mean_eps_sq)
};

/// Anything that can score random forms drawn from a finite pool.
/// Implementations are immutable after construction and safe to share
/// across threads.
class ReliabilityModel {
 public:
  virtual ~ReliabilityModel() = default;

  virtual std::size_t pool_size() const = 0;
  virtual int num_dimensions() const = 0;
  virtual PoolLimit limit() const = 0;

  /// Reliabilities of the prefixes of `items` with the given lengths
  /// (strictly increasing, last <= items.size()).
  virtual std::vector<FormReliability> evaluate_prefixes(std::span<const std::size_t> items,
                                                         std::span<const std::size_t> lengths) const = 0;

  FormReliability evaluate(const TestForm& form) const;
};

/// 2PL pool with per-item moments and the IRF tabulated on a grid rule.
///
/// The true-score variance of a form is the variance over the latent traits
/// of its average IRF; dimensions are independent, so it splits into one
/// grid integral per dimension. This equals (1/n^2) sum_ij cov(T_i, T_j)
/// under the same rule, including repeated items (cov = tau^2).
class CalibratedPool final : public ReliabilityModel {
 public:
  CalibratedPool(ItemPool pool, NormalRule rule, ModelConstants constants = {});

  const ItemPool& pool() const noexcept { return pool_; }
  const NormalRule& rule() const noexcept { return rule_; }
  const ModelConstants& constants() const noexcept { return constants_; }
  std::span<const ItemMoments> moments() const noexcept { return moments_; }

  /// IRF of item `i` at the grid nodes.
  std::span<const double> irf_row(std::size_t i) const;

  std::size_t pool_size() const override { return pool_.size(); }
  int num_dimensions() const override { return pool_.num_dimensions(); }
  PoolLimit limit() const override { return limit_; }

  std::vector<FormReliability> evaluate_prefixes(std::span<const std::size_t> items,
                                                 std::span<const std::size_t> lengths) const override;

 private:
  ItemPool pool_;
  NormalRule rule_;
  ModelConstants constants_;
  std::vector<ItemMoments> moments_;
  std::vector<double> irf_table_;  // pool_.size() x rule_.size(), row-major
  PoolLimit limit_;
};

/// Builds the reliability summary from the two variance components.
/// Throws DegenerateFormError when both are zero.
FormReliability make_form_reliability(std::size_t n, double true_var, double mean_eps_sq);

FormReliability form_reliability(const TestForm& form, const ItemPool& pool, const NormalRule& rule,
                                 const ModelConstants& c = {});

/// var(T_inf) is taken over the pool-average IRF, computed per dimension.
PoolLimit universe_limit(const ItemPool& pool, const NormalRule& rule, const ModelConstants& c = {});

}  // namespace sbrel
