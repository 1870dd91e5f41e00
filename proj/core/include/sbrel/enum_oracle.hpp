#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sbrel/reliability.hpp"

namespace sbrel {

/// Item class of an essentially tau-equivalent universe: every class shares
/// one true score with variance tau_sq_common and has its own error variance.
struct AbstractItemClass {
  std::string label;
  double tau_sq_common = 1.0;
  double eps_sq = 1.0;
};

struct EnumeratedForm {
  std::vector<std::size_t> classes;  // R_1..R_n as class indices
  std::string label;                 // concatenated class labels, e.g. "ACC"
  double mean_eps_sq = 0.0;
  double rho = 0.0;        // reliability of the whole form
  double rho_first = 0.0;  // reliability of the form cut to its first item
};

struct EnumerationResult {
  std::size_t n = 0;
  std::vector<EnumeratedForm> forms;  // lexicographic in class index
  double median_rho = 0.0;
  double mean_rho = 0.0;
  double median_rho_first = 0.0;
  double mean_rho_first = 0.0;
};

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

/// All pool_size^n ordered forms. Throws CapExceededError above `cap`.
EnumerationResult enumerate_forms(const std::vector<AbstractItemClass>& classes, std::size_t n,
                                  std::size_t cap = kDefaultEnumerationCap, unsigned workers = 1);

/// Class pool as a reliability model, so the simulation harness can run on it.
class AbstractClassModel final : public ReliabilityModel {
 public:
  /// Throws ParameterError on an empty list, differing tau_sq_common, or eps_sq <= 0.
  explicit AbstractClassModel(std::vector<AbstractItemClass> classes);

  const std::vector<AbstractItemClass>& classes() const noexcept { return classes_; }

  std::size_t pool_size() const override { return classes_.size(); }
  int num_dimensions() const override { return 1; }
  PoolLimit limit() const override;
  std::vector<FormReliability> evaluate_prefixes(std::span<const std::size_t> items,
                                                 std::span<const std::size_t> lengths) const override;

 private:
  std::vector<AbstractItemClass> classes_;
};

/// Averages over every ordered form of length n, each weighted
/// pool_size^-n (the exact i.i.d. sampling measure).
struct ExhaustiveAverages {
  std::size_t n = 0;
  std::size_t form_count = 0;
  double mean_true_var = 0.0;
  double mean_rho = 0.0;
  double mean_rescaled = 0.0;
};

ExhaustiveAverages exhaustive_averages(const ReliabilityModel& model, std::size_t n,
                                       std::size_t cap = kDefaultEnumerationCap, unsigned workers = 1);

/// Moments of two independently drawn items' scores.
struct MarginalMoments {
  double var1 = 0.0;   // var(X_R1) = E sigma^2(R) + var mu(R)
  double cov12 = 0.0;  // cov(X_R1, X_R2) = E_{w,v} E(T_w T_v) - (E mu)^2
  double rho12 = 0.0;  // cov12 / var1
};

MarginalMoments marginal_moments(const CalibratedPool& pool);
/// Abstract classes share one true score, so cov12 = tau^2 and
/// var1 = tau^2 + mean eps^2.
MarginalMoments marginal_moments(const AbstractClassModel& model);

/// cor(X_Sn, X_S'n) for disjoint random forms, assembled from the marginal
/// moments, against sb(rho12, n).
struct ZimmermanCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

ZimmermanCheck zimmerman_check(const MarginalMoments& m, std::size_t n);
ZimmermanCheck zimmerman_check(const CalibratedPool& pool, std::size_t n);

}  // namespace sbrel
