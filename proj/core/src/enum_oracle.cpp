#include "sbrel/enum_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sbrel/errors.hpp"
#include "sbrel/parallel.hpp"
#include "sbrel/sb_math.hpp"
#include "sbrel/stats.hpp"

namespace sbrel {
namespace {

std::size_t checked_power(std::size_t base, std::size_t n, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / base) {
      throw CapExceededError(fmt::format("{}^{} forms exceed the enumeration cap of {}", base, n, cap));
    }
    total *= base;
  }
  return total;
}

// Digits of `index` in base `k`, most significant first.
void decode(std::size_t index, std::size_t k, std::vector<std::size_t>& digits) {
  for (std::size_t pos = digits.size(); pos-- > 0;) {
    digits[pos] = index % k;
    index /= k;
  }
}

}  // namespace

EnumerationResult enumerate_forms(const std::vector<AbstractItemClass>& classes, std::size_t n,
                                  std::size_t cap, unsigned workers) {
  const AbstractClassModel model(classes);  // validates
  if (n == 0) throw DomainError("form length must be >= 1");
  const std::size_t k = classes.size();
  const std::size_t total = checked_power(k, n, cap);
  const std::size_t block = total / k;
  const double tau = classes.front().tau_sq_common;

  EnumerationResult res;
  res.n = n;
  res.forms.resize(total);
  parallel_for(k, workers, [&](std::size_t first) {
    std::vector<std::size_t> digits(n);
    for (std::size_t j = 0; j < block; ++j) {
      const std::size_t idx = first * block + j;
      decode(idx, k, digits);
      EnumeratedForm& f = res.forms[idx];
      f.classes = digits;
      double eps_sum = 0.0;
      for (std::size_t c : digits) {
        f.label += classes[c].label;
        eps_sum += classes[c].eps_sq;
      }
      f.mean_eps_sq = eps_sum / static_cast<double>(n);
      f.rho = tau / (tau + f.mean_eps_sq / static_cast<double>(n));
      f.rho_first = tau / (tau + classes[digits.front()].eps_sq);
    }
  });

  std::vector<double> rho(total);
  std::vector<double> rho_first(total);
  for (std::size_t i = 0; i < total; ++i) {
    rho[i] = res.forms[i].rho;
    rho_first[i] = res.forms[i].rho_first;
  }
  res.median_rho = median(rho);
  res.mean_rho = mean(rho);
  res.median_rho_first = median(rho_first);
  res.mean_rho_first = mean(rho_first);
  return res;
}

AbstractClassModel::AbstractClassModel(std::vector<AbstractItemClass> classes)
    : classes_(std::move(classes)) {
  if (classes_.empty()) throw ParameterError("abstract pool needs at least one class");
  const double tau = classes_.front().tau_sq_common;
  if (!(tau >= 0.0)) throw ParameterError("common true-score variance must be >= 0");
  for (const auto& c : classes_) {
    if (c.tau_sq_common != tau) {
      throw ParameterError("class " + c.label + ": all classes must share one true-score variance");
    }
    if (!(c.eps_sq > 0.0)) throw ParameterError("class " + c.label + ": error variance must be > 0");
  }
}

PoolLimit AbstractClassModel::limit() const {
  std::vector<double> eps;
  for (const auto& c : classes_) eps.push_back(c.eps_sq);
  PoolLimit l;
  l.universe_var = classes_.front().tau_sq_common;
  l.mean_eps_sq = mean(eps);
  l.limit = l.universe_var / (l.universe_var + l.mean_eps_sq);
  return l;
}

std::vector<FormReliability> AbstractClassModel::evaluate_prefixes(
    std::span<const std::size_t> items, std::span<const std::size_t> lengths) const {
  if (lengths.empty() || lengths.back() > items.size()) {
    throw DomainError("requested prefix longer than the drawn items");
  }
  std::vector<FormReliability> out;
  double eps_sum = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < lengths.back(); ++i) {
    if (items[i] >= classes_.size()) throw DomainError("class index out of range");
    eps_sum += classes_[items[i]].eps_sq;
    if (i + 1 == lengths[next]) {
      // Every class carries the same true score, so the form's true-score
      // variance is tau^2 regardless of composition.
      out.push_back(make_form_reliability(i + 1, classes_.front().tau_sq_common,
                                          eps_sum / static_cast<double>(i + 1)));
      ++next;
    }
  }
  return out;
}

ExhaustiveAverages exhaustive_averages(const ReliabilityModel& model, std::size_t n, std::size_t cap,
                                       unsigned workers) {
  if (n == 0) throw DomainError("form length must be >= 1");
  const std::size_t k = model.pool_size();
  const std::size_t total = checked_power(k, n, cap);
  const std::size_t block = total / k;
  std::vector<double> true_var(total);
  std::vector<double> rho(total);
  std::vector<double> rescaled(total);
  parallel_for(k, workers, [&](std::size_t first) {
    std::vector<std::size_t> digits(n);
    const std::size_t len = n;
    for (std::size_t j = 0; j < block; ++j) {
      const std::size_t idx = first * block + j;
      decode(idx, k, digits);
      const FormReliability r = model.evaluate_prefixes(digits, std::span<const std::size_t>(&len, 1)).front();
      true_var[idx] = r.true_var;
      rho[idx] = r.rho;
      rescaled[idx] = r.rescaled;
    }
  });
  return ExhaustiveAverages{n, total, mean(true_var), mean(rho), mean(rescaled)};
}

MarginalMoments marginal_moments(const CalibratedPool& pool) {
  const std::size_t n_items = pool.pool_size();
  const auto moments = pool.moments();
  std::vector<double> mu(n_items);
  std::vector<double> sigma(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    mu[i] = moments[i].mu;
    sigma[i] = moments[i].sigma_sq;
  }
  const double mu_bar = mean(mu);
  std::vector<double> dev(n_items);
  for (std::size_t i = 0; i < n_items; ++i) dev[i] = (mu[i] - mu_bar) * (mu[i] - mu_bar);

  MarginalMoments m;
  m.var1 = mean(sigma) + mean(dev);

  // E_{w,v} E(T_w T_v): items on different dimensions factorize into
  // products of means; same-dimension pairs integrate the per-dimension sum
  // of IRFs.
  const auto dims = static_cast<std::size_t>(pool.num_dimensions());
  const std::size_t k_nodes = pool.rule().size();
  const auto w = pool.rule().weights();
  std::vector<double> f(dims * k_nodes, 0.0);
  for (std::size_t i = 0; i < n_items; ++i) {
    const auto d = static_cast<std::size_t>(pool.pool()[i].dim - 1);
    const auto row = pool.irf_row(i);
    for (std::size_t k = 0; k < k_nodes; ++k) f[d * k_nodes + k] += row[k];
  }
  const double inv_n = 1.0 / static_cast<double>(n_items);
  std::vector<double> dim_mean(dims, 0.0);
  double same_dim = 0.0;
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t k = 0; k < k_nodes; ++k) {
      const double v = f[d * k_nodes + k] * inv_n;
      dim_mean[d] += w[k] * v;
      same_dim += w[k] * v * v;
    }
  }
  double cross_dim = 0.0;
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t e = 0; e < dims; ++e) {
      if (d != e) cross_dim += dim_mean[d] * dim_mean[e];
    }
  }
  m.cov12 = same_dim + cross_dim - mu_bar * mu_bar;
  m.rho12 = m.cov12 / m.var1;
  return m;
}

MarginalMoments marginal_moments(const AbstractClassModel& model) {
  const PoolLimit l = model.limit();
  MarginalMoments m;
  m.cov12 = l.universe_var;
  m.var1 = l.universe_var + l.mean_eps_sq;
  m.rho12 = m.cov12 / m.var1;
  return m;
}

ZimmermanCheck zimmerman_check(const MarginalMoments& m, std::size_t n) {
  if (n == 0) throw DomainError("form length must be >= 1");
  const double nn = static_cast<double>(n);
  // Disjoint forms share no draws: cov of their means is cov12.
  const double form_var = m.var1 / nn + (nn - 1.0) * m.cov12 / nn;
  ZimmermanCheck z;
  z.lhs = m.cov12 / form_var;
  z.rhs = sb(std::clamp(m.rho12, 0.0, 1.0), LengthFactor(static_cast<std::int64_t>(n)));
  return z;
}

ZimmermanCheck zimmerman_check(const CalibratedPool& pool, std::size_t n) {
  return zimmerman_check(marginal_moments(pool), n);
}

}  // namespace sbrel
