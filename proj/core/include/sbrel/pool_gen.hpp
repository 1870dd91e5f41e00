#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sbrel/irt.hpp"
#include "sbrel/random_stream.hpp"

namespace sbrel {

/// Four-parameter beta: min + (max - min) * Beta(alpha, beta).
struct Beta4Spec {
  double alpha = 1.0;
  double beta = 1.0;
  double min = 0.0;
  double max = 1.0;

  double mean() const noexcept { return min + (max - min) * alpha / (alpha + beta); }

  /// Solves mean = min + (max - min) * alpha / (alpha + beta) for the given
  /// alpha + beta. Throws ParameterError unless min < mean < max and sum > 0.
  static Beta4Spec from_mean(double mean, double shape_sum, double min, double max);

  /// Throws ParameterError on alpha <= 0, beta <= 0, max <= min or non-finite values.
  void validate() const;
};

/// Finite support with probabilities summing to 1 (within 1e-12).
struct DiscreteSpec {
  std::vector<double> values;
  std::vector<double> probs;

  double mean() const noexcept;
  void validate() const;
};

using ParamDistribution = std::variant<Beta4Spec, DiscreteSpec>;

double distribution_mean(const ParamDistribution& d);

/// Everything needed to rebuild one case's pool.
struct PoolCaseSpec {
  std::string case_id;
  std::string family;  // "beta", "binary1", "binary2", "irregular"
  int num_dimensions = 1;
  std::size_t pool_size = 1000;
  double a_max = 0.0;  // upper end of the a support (beta family), 0 otherwise
  ParamDistribution a_spec = Beta4Spec{};
  ParamDistribution b_spec = Beta4Spec{};
  std::uint64_t seed = 0;
};

double sample_beta4(const Beta4Spec& spec, Engine& rng);
double sample_param(const ParamDistribution& d, Engine& rng);

/// 18 cases (6 discrimination x 3 difficulty distributions) for each of
/// 1, 2 and 5 dimensions. Discrimination: support (0, a_max), alpha + beta
/// in {12, 2}, mean in {1/6, 1/2, 5/6} * a_max. Difficulty: support (-2, 2),
/// alpha + beta = 4, mean in {-1, 0, 1}.
std::vector<PoolCaseSpec> study1_case_grid(int a_max, std::uint64_t seed = 0);

/// Type 1: binary a in {0.5, 2.0}, b in {-1.7, 1.7}; type 2: b in {0, 1.7}
/// (15 cases each, pools of 1000); type 3: 100 pools of 10 items with
/// a ~ U[0.5, 2], b ~ U[-2, 2].
std::vector<PoolCaseSpec> study2_case_grid(int type, std::uint64_t seed = 0);

/// Deterministic in (case_id, seed). Each item draws its dimension
/// uniformly, then a, then b.
ItemPool build_pool(const PoolCaseSpec& spec);

/// Reads a delimited text file with header `a,b` or `a,b,dim` (comma, tab or
/// semicolon). Blank lines and lines starting with '#' are skipped.
/// Throws ParseError naming the line, or ParameterError on invalid items.
ItemPool load_external_pool(const std::filesystem::path& path);
ItemPool parse_pool_text(const std::string& text);

void to_json(nlohmann::json& j, const PoolCaseSpec& spec);
void from_json(const nlohmann::json& j, PoolCaseSpec& spec);

}  // namespace sbrel
