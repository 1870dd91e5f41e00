#include "sbrel/reliability.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sbrel/errors.hpp"
#include "sbrel/sb_math.hpp"
#include "sbrel/stats.hpp"

namespace sbrel {
namespace {

void check_lengths(std::span<const std::size_t> lengths, std::size_t available) {
  if (lengths.empty()) throw DomainError("no form lengths requested");
  for (std::size_t g = 0; g < lengths.size(); ++g) {
    if (lengths[g] == 0 || (g > 0 && lengths[g] <= lengths[g - 1])) {
      throw DomainError("form lengths must be positive and strictly increasing");
    }
  }
  if (lengths.back() > available) {
    throw DomainError("form length " + std::to_string(lengths.back()) + " exceeds the " +
                      std::to_string(available) + " drawn items");
  }
}

// Variance over the rule of `sum[k] / n`.
double grid_variance(std::span<const double> sum, std::span<const double> w, double n) {
  double m = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) m += w[k] * sum[k];
  m /= n;
  double v = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const double d = sum[k] / n - m;
    v += w[k] * d * d;
  }
  return v;
}

}  // namespace

FormReliability ReliabilityModel::evaluate(const TestForm& form) const {
  const std::size_t n = form.length();
  return evaluate_prefixes(form.items, std::span<const std::size_t>(&n, 1)).front();
}

FormReliability make_form_reliability(std::size_t n, double true_var, double mean_eps_sq) {
  FormReliability r;
  r.n = n;
  r.true_var = true_var;
  r.mean_eps_sq = mean_eps_sq;
  r.err_var = mean_eps_sq / static_cast<double>(n);
  const double total = r.true_var + r.err_var;
  if (!(total > 0.0)) {
    throw DegenerateFormError("form of length " + std::to_string(n) + " has zero observed variance");
  }
  r.rho = std::clamp(r.true_var / total, 0.0, 1.0);
  r.rescaled = sb(r.rho, LengthFactor(1, static_cast<std::int64_t>(n)));
  return r;
}

CalibratedPool::CalibratedPool(ItemPool pool, NormalRule rule, ModelConstants constants)
    : pool_(std::move(pool)), rule_(std::move(rule)), constants_(constants) {
  const std::size_t n_items = pool_.size();
  const std::size_t k_nodes = rule_.size();
  const auto z = rule_.nodes();

  moments_.reserve(n_items);
  irf_table_.resize(n_items * k_nodes);
  for (std::size_t i = 0; i < n_items; ++i) {
    moments_.push_back(item_moments(pool_[i], rule_, constants_));
    double* row = irf_table_.data() + i * k_nodes;
    for (std::size_t k = 0; k < k_nodes; ++k) row[k] = irf(pool_[i], z[k], constants_);
  }

  // The pool-average IRF is the true score of a form holding every item once.
  std::vector<std::size_t> all(n_items);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const std::size_t len = n_items;
  const FormReliability whole = evaluate_prefixes(all, std::span<const std::size_t>(&len, 1)).front();
  limit_.universe_var = whole.true_var;
  limit_.mean_eps_sq = whole.mean_eps_sq;
  limit_.limit = limit_.universe_var / (limit_.universe_var + limit_.mean_eps_sq);
}

std::span<const double> CalibratedPool::irf_row(std::size_t i) const {
  return std::span<const double>(irf_table_).subspan(i * rule_.size(), rule_.size());
}

std::vector<FormReliability> CalibratedPool::evaluate_prefixes(
    std::span<const std::size_t> items, std::span<const std::size_t> lengths) const {
  check_lengths(lengths, items.size());
  const std::size_t k_nodes = rule_.size();
  const auto n_dims = static_cast<std::size_t>(pool_.num_dimensions());
  const auto w = rule_.weights();

  std::vector<double> acc(n_dims * k_nodes, 0.0);
  std::vector<std::size_t> per_dim(n_dims, 0);
  double eps_sum = 0.0;

  std::vector<FormReliability> out;
  out.reserve(lengths.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < lengths.back(); ++i) {
    const std::size_t item = items[i];
    if (item >= pool_.size()) {
      throw DomainError("item index " + std::to_string(item) + " outside a pool of " +
                        std::to_string(pool_.size()));
    }
    const auto d = static_cast<std::size_t>(pool_[item].dim - 1);
    const auto row = irf_row(item);
    double* a = acc.data() + d * k_nodes;
    for (std::size_t k = 0; k < k_nodes; ++k) a[k] += row[k];
    ++per_dim[d];
    eps_sum += moments_[item].eps_sq;

    if (i + 1 == lengths[next]) {
      const double n = static_cast<double>(i + 1);
      double true_var = 0.0;
      for (std::size_t dd = 0; dd < n_dims; ++dd) {
        if (per_dim[dd] == 0) continue;
        true_var += grid_variance(std::span<const double>(acc).subspan(dd * k_nodes, k_nodes), w, n);
      }
      out.push_back(make_form_reliability(i + 1, true_var, eps_sum / n));
      ++next;
    }
  }
  return out;
}

FormReliability form_reliability(const TestForm& form, const ItemPool& pool, const NormalRule& rule,
                                 const ModelConstants& c) {
  if (form.length() == 0) throw DomainError("empty test form");
  return CalibratedPool(pool, rule, c).evaluate(form);
}

PoolLimit universe_limit(const ItemPool& pool, const NormalRule& rule, const ModelConstants& c) {
  return CalibratedPool(pool, rule, c).limit();
}

}  // namespace sbrel
