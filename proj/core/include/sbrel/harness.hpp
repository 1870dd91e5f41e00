#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sbrel/pool_gen.hpp"
#include "sbrel/reliability.hpp"

namespace sbrel {

struct StudyConfig {
  std::vector<std::size_t> lengths = {10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  std::size_t quad_nodes = NormalRule::kDefaultNodes;
  unsigned workers = 1;
  bool keep_forms = false;

  /// Throws DomainError on replicates < 2 or a grid that is empty or not
  /// strictly increasing.
  void validate() const;
};

struct CaseLengthAggregate {
  std::string case_id;
  std::size_t n = 0;
  double mean_rho = 0.0;
  double median_rho = 0.0;
  double sd_rho = 0.0;
  double mean_rescaled = 0.0;  // mean of per-form sb(rho, 1/n)
  double limit = 0.0;
  double bias = 0.0;  // mean_rescaled - limit
};

struct CaseResult {
  std::string case_id;
  std::string family;
  int num_dimensions = 1;
  double a_max = 0.0;
  std::size_t pool_size = 0;
  PoolLimit limit;
  std::vector<CaseLengthAggregate> by_length;
  std::vector<std::vector<std::size_t>> forms;  // longest form per replicate, when kept
};

/// Identifies a case for output without a generating spec (external pools).
struct CaseInfo {
  std::string case_id;
  std::string family;
  int num_dimensions = 1;
  double a_max = 0.0;
};

/// Stream for replicate `rep` of a case. Depends only on (seed, case_id, rep).
RandomStream replicate_stream(std::uint64_t seed, const std::string& case_id, std::size_t rep);

/// Samples cfg.replicates nested trajectories on `model` and aggregates.
CaseResult run_model(const CaseInfo& info, const ReliabilityModel& model, const StudyConfig& cfg);

/// Builds and calibrates the case's pool, then run_model. Errors carry the case id.
CaseResult run_case(const PoolCaseSpec& spec, const StudyConfig& cfg);

/// Aggregates given trajectories (each at least lengths.back() long).
CaseResult aggregate_trajectories(const CaseInfo& info, const ReliabilityModel& model,
                                  const std::vector<std::vector<std::size_t>>& trajectories,
                                  const std::vector<std::size_t>& lengths, unsigned workers = 1);

struct PredictionError {
  std::size_t n_from = 0;
  std::size_t n_to = 0;
  bool forward = false;
  double error = 0.0;
};

struct PredictionErrorReport {
  std::string case_id;
  double max_backward_error = 0.0;
  double max_forward_error = 0.0;
  std::vector<PredictionError> pairs;  // every ordered pair of distinct lengths
};

/// |predict(mean_rho(n_from), n_from, n_to) - mean_rho(n_to)| for all ordered pairs.
PredictionErrorReport prediction_errors(const std::vector<CaseLengthAggregate>& aggs);

/// Largest absolute difference between mean rescaled reliabilities of two lengths.
double rescaled_spread(const std::vector<CaseLengthAggregate>& aggs);

struct ConvergencePoint {
  std::size_t n = 0;
  double mean_rescaled = 0.0;
  double limit = 0.0;
  double deviation = 0.0;  // |mean_rescaled - limit|
};

struct ConvergenceReport {
  std::string case_id;
  std::vector<ConvergencePoint> points;
  double tail_sup_deviation = 0.0;  // over n >= max length / 2
};

ConvergenceReport convergence_diagnostic(const CaseInfo& info, const ReliabilityModel& model,
                                         const StudyConfig& cfg, const std::vector<std::size_t>& long_grid);

struct DispersionRow {
  std::string group;
  std::size_t n = 0;
  std::size_t cases = 0;
  double median_sd = 0.0;
  double p90_sd = 0.0;
  double max_sd = 0.0;
};

/// Per group and length: median, 90th percentile and maximum of sd_rho over
/// cases. Cases whose sd_rho is zero at every length (parallel items) are
/// dropped. Groups come from `group_of` (default: the case family); an "all"
/// group pools every case. Needs at least two cases in total.
std::vector<DispersionRow> dispersion_study(
    const std::vector<CaseResult>& cases,
    const std::function<std::string(const CaseResult&)>& group_of = {});

}  // namespace sbrel
