#include "sbrel/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "sbrel/errors.hpp"
#include "sbrel/form_sampler.hpp"
#include "sbrel/parallel.hpp"
#include "sbrel/sb_math.hpp"
#include "sbrel/stats.hpp"

namespace sbrel {

void StudyConfig::validate() const {
  if (replicates < 2) throw DomainError("need at least 2 replicates per case");
  if (lengths.empty()) throw DomainError("length grid is empty");
  for (std::size_t g = 0; g < lengths.size(); ++g) {
    if (lengths[g] == 0 || (g > 0 && lengths[g] <= lengths[g - 1])) {
      throw DomainError("length grid must be positive and strictly increasing");
    }
  }
  if (quad_nodes < NormalRule::kMinNodes) {
    throw DomainError(fmt::format("quadrature needs at least {} nodes", NormalRule::kMinNodes));
  }
}

RandomStream replicate_stream(std::uint64_t seed, const std::string& case_id, std::size_t rep) {
  return RandomStream(seed).child(case_id).child("forms").child(static_cast<std::uint64_t>(rep));
}

CaseResult aggregate_trajectories(const CaseInfo& info, const ReliabilityModel& model,
                                  const std::vector<std::vector<std::size_t>>& trajectories,
                                  const std::vector<std::size_t>& lengths, unsigned workers) {
  const std::size_t reps = trajectories.size();
  const std::size_t grid = lengths.size();
  if (reps == 0) throw DomainError(info.case_id + ": no trajectories to aggregate");

  // Slot per (replicate, length); reduced serially below so the result is
  // independent of the worker count.
  std::vector<double> rho(reps * grid);
  std::vector<double> rescaled(reps * grid);
  parallel_for(reps, workers, [&](std::size_t r) {
    const auto forms = model.evaluate_prefixes(trajectories[r], lengths);
    for (std::size_t g = 0; g < grid; ++g) {
      rho[r * grid + g] = forms[g].rho;
      rescaled[r * grid + g] = forms[g].rescaled;
    }
  });

  CaseResult res;
  res.case_id = info.case_id;
  res.family = info.family;
  res.num_dimensions = info.num_dimensions;
  res.a_max = info.a_max;
  res.pool_size = model.pool_size();
  res.limit = model.limit();

  std::vector<double> col_rho(reps);
  std::vector<double> col_resc(reps);
  for (std::size_t g = 0; g < grid; ++g) {
    for (std::size_t r = 0; r < reps; ++r) {
      col_rho[r] = rho[r * grid + g];
      col_resc[r] = rescaled[r * grid + g];
    }
    CaseLengthAggregate a;
    a.case_id = info.case_id;
    a.n = lengths[g];
    a.mean_rho = mean(col_rho);
    a.median_rho = median(col_rho);
    a.sd_rho = sample_sd(col_rho);
    a.mean_rescaled = mean(col_resc);
    a.limit = res.limit.limit;
    a.bias = a.mean_rescaled - a.limit;
    res.by_length.push_back(a);
  }
  return res;
}

CaseResult run_model(const CaseInfo& info, const ReliabilityModel& model, const StudyConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<std::size_t>> traj(cfg.replicates);
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    traj[r] = sample_trajectory(model.pool_size(), cfg.lengths, replicate_stream(cfg.seed, info.case_id, r)).items;
  }
  CaseResult res = aggregate_trajectories(info, model, traj, cfg.lengths, cfg.workers);
  if (cfg.keep_forms) res.forms = std::move(traj);
  return res;
}

CaseResult run_case(const PoolCaseSpec& spec, const StudyConfig& cfg) {
  try {
    CalibratedPool pool(build_pool(spec), NormalRule::grid(cfg.quad_nodes));
    return run_model(CaseInfo{spec.case_id, spec.family, spec.num_dimensions, spec.a_max}, pool, cfg);
  } catch (const Error& e) {
    throw Error(fmt::format("case {}: {}", spec.case_id, e.what()));
  }
}

PredictionErrorReport prediction_errors(const std::vector<CaseLengthAggregate>& aggs) {
  if (aggs.size() < 2) throw DomainError("prediction errors need at least two lengths");
  PredictionErrorReport rep;
  rep.case_id = aggs.front().case_id;
  for (const auto& from : aggs) {
    for (const auto& to : aggs) {
      if (from.n == to.n) continue;
      PredictionError e;
      e.n_from = from.n;
      e.n_to = to.n;
      e.forward = to.n > from.n;
      e.error = std::abs(predict(from.mean_rho, static_cast<std::int64_t>(from.n),
                                 static_cast<std::int64_t>(to.n)) -
                         to.mean_rho);
      double& max = e.forward ? rep.max_forward_error : rep.max_backward_error;
      max = std::max(max, e.error);
      rep.pairs.push_back(e);
    }
  }
  return rep;
}

double rescaled_spread(const std::vector<CaseLengthAggregate>& aggs) {
  if (aggs.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(aggs.begin(), aggs.end(), [](const auto& x, const auto& y) {
    return x.mean_rescaled < y.mean_rescaled;
  });
  return hi->mean_rescaled - lo->mean_rescaled;
}

ConvergenceReport convergence_diagnostic(const CaseInfo& info, const ReliabilityModel& model,
                                         const StudyConfig& cfg, const std::vector<std::size_t>& long_grid) {
  StudyConfig c = cfg;
  c.lengths = long_grid;
  c.keep_forms = false;
  const CaseResult res = run_model(info, model, c);

  ConvergenceReport rep;
  rep.case_id = info.case_id;
  const std::size_t tail_from = long_grid.back() / 2;
  for (const auto& a : res.by_length) {
    ConvergencePoint p{a.n, a.mean_rescaled, a.limit, std::abs(a.mean_rescaled - a.limit)};
    if (a.n >= tail_from) rep.tail_sup_deviation = std::max(rep.tail_sup_deviation, p.deviation);
    rep.points.push_back(p);
  }
  return rep;
}

std::vector<DispersionRow> dispersion_study(const std::vector<CaseResult>& cases,
                                            const std::function<std::string(const CaseResult&)>& group_of) {
  if (cases.size() < 2) throw DomainError("dispersion study needs at least two cases");

  // group -> n -> sd values, both keyed in sorted order for stable output.
  std::map<std::string, std::map<std::size_t, std::vector<double>>> buckets;
  for (const auto& c : cases) {
    const bool degenerate = std::all_of(c.by_length.begin(), c.by_length.end(),
                                        [](const auto& a) { return a.sd_rho == 0.0; });
    if (degenerate) continue;
    const std::string group = group_of ? group_of(c) : c.family;
    for (const auto& a : c.by_length) {
      buckets[group][a.n].push_back(a.sd_rho);
      if (group != "all") buckets["all"][a.n].push_back(a.sd_rho);
    }
  }

  std::vector<DispersionRow> rows;
  for (const auto& [group, by_n] : buckets) {
    for (const auto& [n, sds] : by_n) {
      DispersionRow r;
      r.group = group;
      r.n = n;
      r.cases = sds.size();
      r.median_sd = median(sds);
      r.p90_sd = quantile(sds, 0.9);
      r.max_sd = *std::max_element(sds.begin(), sds.end());
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace sbrel
