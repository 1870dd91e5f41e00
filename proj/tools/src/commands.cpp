#include "sbrel_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "sbrel/enum_oracle.hpp"
#include "sbrel/errors.hpp"
#include "sbrel/harness.hpp"
#include "sbrel/pool_gen.hpp"
#include "sbrel/sb_math.hpp"
#include "sbrel_cli/config.hpp"
#include "sbrel_cli/output.hpp"

#ifndef SBREL_VERSION
#define SBREL_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace sbrel::cli {
namespace {

std::string now_utc() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr)));
}

std::string hex(std::uint64_t key) { return fmt::format("{:016x}", key); }

std::string r3(double x) { return fmt::format("{:.3f}", x); }

/// One case to run: either a generated pool or an external file.
struct CaseJob {
  std::optional<PoolCaseSpec> spec;
  CaseInfo info;
  std::optional<ItemPool> pool;  // external only
  std::string source;            // external file path
};

bool selected(const std::string& id, const std::vector<std::string>& filters) {
  if (filters.empty()) return true;
  return std::any_of(filters.begin(), filters.end(),
                     [&](const std::string& f) { return id.find(f) != std::string::npos; });
}

std::vector<CaseJob> study1_jobs(const RunConfig& cfg) {
  std::vector<CaseJob> jobs;
  for (int a : cfg.a_max) {
    for (auto& spec : study1_case_grid(a, cfg.seed)) {
      if (std::find(cfg.dims.begin(), cfg.dims.end(), spec.num_dimensions) == cfg.dims.end()) continue;
      if (!selected(spec.case_id, cfg.cases)) continue;
      CaseInfo info{spec.case_id, spec.family, spec.num_dimensions, spec.a_max};
      jobs.push_back({std::move(spec), std::move(info), std::nullopt, {}});
    }
  }
  return jobs;
}

std::vector<CaseJob> study2_jobs(const RunConfig& cfg) {
  std::vector<CaseJob> jobs;
  for (int t : cfg.types) {
    for (auto& spec : study2_case_grid(t, cfg.seed)) {
      if (!selected(spec.case_id, cfg.cases)) continue;
      CaseInfo info{spec.case_id, spec.family, spec.num_dimensions, spec.a_max};
      jobs.push_back({std::move(spec), std::move(info), std::nullopt, {}});
    }
  }
  return jobs;
}

std::vector<CaseJob> external_jobs(const RunConfig& cfg) {
  std::vector<CaseJob> jobs;
  for (const auto& file : cfg.pool_files) {
    ItemPool pool = [&] {
      try {
        return load_external_pool(file);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }();
    const std::string stem = fs::path(file).stem().string();
    CaseInfo info{"ext-" + stem, "external:" + stem, pool.num_dimensions(), 0.0};
    jobs.push_back({std::nullopt, std::move(info), std::move(pool), file});
  }
  return jobs;
}

StudyConfig study_config(const RunConfig& cfg, const std::vector<std::size_t>& lengths) {
  StudyConfig sc;
  sc.lengths = lengths;
  sc.replicates = cfg.replicates;
  sc.seed = cfg.seed;
  sc.quad_nodes = cfg.quad_nodes;
  sc.workers = cfg.workers;
  sc.keep_forms = cfg.dump_forms;
  return sc;
}

CaseResult run_job(const CaseJob& job, const StudyConfig& sc) {
  if (job.spec) return run_case(*job.spec, sc);
  try {
    const CalibratedPool pool(*job.pool, NormalRule::grid(sc.quad_nodes));
    return run_model(job.info, pool, sc);
  } catch (const Error& e) {
    throw Error(fmt::format("case {}: {}", job.info.case_id, e.what()));
  }
}

json case_entry(const CaseJob& job, std::uint64_t seed) {
  json j = {{"case_id", job.info.case_id},
            {"family", job.info.family},
            {"forms_stream", hex(RandomStream(seed).child(job.info.case_id).child("forms").key())}};
  if (job.spec) {
    j["pool_stream"] = hex(RandomStream(job.spec->seed).child(job.spec->case_id).child("pool").key());
    j["spec"] = *job.spec;
  } else {
    j["pool_file"] = job.source;
  }
  return j;
}

class Study {
 public:
  Study(RunConfig cfg, std::ostream& out) : cfg_(std::move(cfg)), out_(out), dir_(cfg_.out_dir) {}

  void run() {
    started_ = now_utc();
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(fmt::format("cannot create output directory {}: {}", dir_.string(), ec.message()));
    switch (cfg_.preset) {
      case Preset::Table1: table1(); break;
      case Preset::Study1: grid_study("study1", study1_jobs(cfg_)); break;
      case Preset::Study2: {
        auto jobs = study2_jobs(cfg_);
        for (auto& j : external_jobs(cfg_)) jobs.push_back(std::move(j));
        grid_study("study2", std::move(jobs));
        break;
      }
      case Preset::Study3: study3(); break;
      case Preset::Converge: converge(); break;
    }
    write_manifest();
  }

  /// Resolves jobs without running them, so selection errors surface as
  /// configuration errors.
  static void check_selection(const RunConfig& cfg) {
    std::size_t count = 0;
    switch (cfg.preset) {
      case Preset::Table1: return;
      case Preset::Study1: count = study1_jobs(cfg).size(); break;
      case Preset::Study2: count = study2_jobs(cfg).size() + external_jobs(cfg).size(); break;
      case Preset::Study3: count = study1_jobs(cfg).size() + study2_jobs(cfg).size() + external_jobs(cfg).size(); break;
      case Preset::Converge: count = study1_jobs(cfg).size() + external_jobs(cfg).size(); break;
    }
    if (count == 0) throw ConfigError("the case filters select no cases");
  }

 private:
  fs::path file(const std::string& name) {
    outputs_.push_back(name);
    return dir_ / name;
  }

  std::vector<CaseResult> run_jobs(const std::vector<CaseJob>& jobs, const std::vector<std::size_t>& lengths) {
    const StudyConfig sc = study_config(cfg_, lengths);
    std::vector<CaseResult> results;
    for (const auto& job : jobs) {
      results.push_back(run_job(job, sc));
      cases_.push_back(case_entry(job, cfg_.seed));
    }
    return results;
  }

  void table1() {
    const std::vector<AbstractItemClass> classes{{"A", 1.0, 3.0}, {"B", 1.0, 6.0}, {"C", 1.0, 9.0}};
    const auto three = enumerate_forms(classes, 3);
    const auto one = enumerate_forms(classes, 1);
    {
      CsvFile csv(file("table1.csv"), {"form", "R1", "R2", "R3", "eps_sq_R1", "eps_sq_R2", "eps_sq_R3",
                                       "mean_eps_sq", "rho"});
      for (const auto& f : three.forms) {
        std::vector<std::string> row{f.label};
        for (std::size_t c : f.classes) row.push_back(classes[c].label);
        for (std::size_t c : f.classes) row.push_back(num(classes[c].eps_sq));
        row.push_back(num(f.mean_eps_sq));
        row.push_back(num(f.rho));
        csv.row(row);
      }
    }
    const double sb_median = sb(three.median_rho_first, LengthFactor(3));
    const double sb_mean = sb(three.mean_rho_first, LengthFactor(3));
    {
      CsvFile csv(file("table1_summary.csv"), {"statistic", "n1", "n3", "sb_n1_to_n3"});
      csv.row({"median", num(one.median_rho), num(three.median_rho), num(sb_median)});
      csv.row({"mean", num(one.mean_rho), num(three.mean_rho), num(sb_mean)});
    }
    out_ << "form  mean_eps  rho\n";
    for (const auto& f : three.forms) out_ << fmt::format("{}   {:>8.3f}  {:.2f}\n", f.label, f.mean_eps_sq, f.rho);
    out_ << fmt::format("median rho: n=1 {}  n=3 {}  sb(median n=1, 3) {}\n", r3(one.median_rho),
                        r3(three.median_rho), r3(sb_median));
    out_ << fmt::format("mean rho:   n=1 {}  n=3 {}  sb(mean n=1, 3) {}\n", r3(one.mean_rho), r3(three.mean_rho),
                        r3(sb_mean));
  }

  void grid_study(const std::string& study, std::vector<CaseJob> jobs) {
    const auto results = run_jobs(jobs, cfg_.lengths);
    std::vector<PredictionErrorReport> reports;
    for (const auto& r : results) reports.push_back(prediction_errors(r.by_length));

    write_aggregates(file(study + "_aggregates.csv"), study, results);
    write_prediction_errors(file(study + "_prediction_errors.csv"), reports);
    if (cfg_.dump_forms) write_forms(file(study + "_forms.csv"), results);

    CsvFile summary(file(study + "_summary.csv"),
                    {"study", "case_id", "family", "dims", "a_max", "pool_size", "universe_var", "mean_eps_sq",
                     "limit", "max_forward_error", "max_backward_error", "rescaled_spread", "bias_first",
                     "bias_last"});
    // family -> (max prediction error, max rescaled spread, cases)
    std::map<std::string, std::tuple<double, double, std::size_t>> groups;
    out_ << fmt::format("{:<28} {:>6} {:>6} {:>7} {:>7}\n", "case", "fwd", "bwd", "spread", "limit");
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      const auto& p = reports[i];
      const double spread = rescaled_spread(r.by_length);
      summary.row({study, r.case_id, r.family, std::to_string(r.num_dimensions), num(r.a_max),
                   std::to_string(r.pool_size), num(r.limit.universe_var), num(r.limit.mean_eps_sq),
                   num(r.limit.limit), num(p.max_forward_error), num(p.max_backward_error), num(spread),
                   num(r.by_length.front().bias), num(r.by_length.back().bias)});
      auto& [err, spr, count] = groups[r.family];
      err = std::max({err, p.max_forward_error, p.max_backward_error});
      spr = std::max(spr, spread);
      ++count;
      out_ << fmt::format("{:<28} {:>6} {:>6} {:>7} {:>7}\n", r.case_id, r3(p.max_forward_error),
                          r3(p.max_backward_error), r3(spread), r3(r.limit.limit));
    }
    if (study == "study2") {
      CsvFile t2(file("table2.csv"), {"group", "cases", "max_prediction_error", "max_rescaled_difference"});
      out_ << "\ngroup                 cases  max_error  max_rescaled_diff\n";
      for (const auto& [family, g] : groups) {
        const auto& [err, spr, count] = g;
        t2.row({family, std::to_string(count), num(err), num(spr)});
        out_ << fmt::format("{:<21} {:>5}  {:>9}  {:>17}\n", family, count, r3(err), r3(spr));
      }
    }
  }

  void study3() {
    auto jobs = study1_jobs(cfg_);
    for (auto& j : study2_jobs(cfg_)) jobs.push_back(std::move(j));
    for (auto& j : external_jobs(cfg_)) jobs.push_back(std::move(j));
    const auto results = run_jobs(jobs, cfg_.lengths);
    write_aggregates(file("study3_aggregates.csv"), "study3", results);
    if (cfg_.dump_forms) write_forms(file("study3_forms.csv"), results);
    const auto rows = dispersion_study(results);
    CsvFile csv(file("study3_dispersion.csv"), {"group", "n", "cases", "median_sd", "p90_sd", "max_sd"});
    out_ << "group                 n   cases  median_sd  p90_sd  max_sd\n";
    for (const auto& r : rows) {
      csv.row({r.group, std::to_string(r.n), std::to_string(r.cases), num(r.median_sd), num(r.p90_sd),
               num(r.max_sd)});
      out_ << fmt::format("{:<21} {:>3} {:>6}  {:>9}  {:>6}  {:>6}\n", r.group, r.n, r.cases,
                          fmt::format("{:.4f}", r.median_sd), r3(r.p90_sd), r3(r.max_sd));
    }
  }

  void converge() {
    auto jobs = study1_jobs(cfg_);
    for (auto& j : external_jobs(cfg_)) jobs.push_back(std::move(j));
    const auto results = run_jobs(jobs, cfg_.long_lengths);
    CsvFile csv(file("converge.csv"), {"case_id", "dims", "n", "mean_rescaled", "limit", "deviation"});
    CsvFile summary(file("converge_summary.csv"),
                    {"case_id", "dims", "limit", "deviation_first", "deviation_last", "tail_sup_deviation"});
    const std::size_t tail_from = cfg_.long_lengths.back() / 2;
    out_ << "case                          n   mean_rescaled  limit  deviation\n";
    for (const auto& r : results) {
      double tail = 0.0;
      for (const auto& a : r.by_length) {
        const double dev = std::abs(a.bias);
        if (a.n >= tail_from) tail = std::max(tail, dev);
        csv.row({r.case_id, std::to_string(r.num_dimensions), std::to_string(a.n), num(a.mean_rescaled),
                 num(a.limit), num(dev)});
        out_ << fmt::format("{:<28} {:>4}  {:>13}  {:>5}  {:>9}\n", r.case_id, a.n, r3(a.mean_rescaled),
                            r3(a.limit), fmt::format("{:.4f}", dev));
      }
      summary.row({r.case_id, std::to_string(r.num_dimensions), num(r.limit.limit),
                   num(std::abs(r.by_length.front().bias)), num(std::abs(r.by_length.back().bias)), num(tail)});
    }
  }

  void write_manifest() {
    json m = {{"tool", "sbrel"},
              {"version", SBREL_VERSION},
              {"config", cfg_},
              {"seed", cfg_.seed},
              {"cases", cases_},
              {"outputs", outputs_},
              {"started_at", started_},
              {"finished_at", now_utc()}};
    std::ofstream f(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    f << m.dump(2) << '\n';
    if (!f) throw Error("cannot write " + (dir_ / "manifest.json").string());
    out_ << fmt::format("wrote {} files and manifest.json to {}\n", outputs_.size(), dir_.string());
  }

  RunConfig cfg_;
  std::ostream& out_;
  fs::path dir_;
  std::string started_;
  std::vector<std::string> outputs_;
  json cases_ = json::array();
};

struct StudyFlags {
  std::string preset;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::string lengths;
  std::string long_lengths;
  std::vector<int> dims;
  std::vector<int> a_max;
  std::vector<int> types;
  std::vector<std::string> pool_files;
  std::vector<std::string> cases;
  std::size_t quad_nodes = 0;
  unsigned workers = 1;
  std::string out_dir;
  bool dump_forms = false;
  bool full_scale = false;
};

RunConfig resolve_study(const CLI::App& app, const StudyFlags& f) {
  RunConfig cfg;
  const bool from_file = app.count("--config") > 0;
  if (from_file) cfg = load_config(f.config);
  if (app.count("--preset") > 0) {
    cfg.preset = parse_preset(f.preset);
  } else if (!from_file) {
    throw ConfigError("study needs --preset or --config");
  }
  if (app.count("--seed")) cfg.seed = f.seed;
  if (app.count("--replicates")) {
    cfg.replicates = f.replicates;
  } else if (f.full_scale) {
    cfg.replicates = 1000;
  }
  if (app.count("--lengths")) cfg.lengths = parse_length_list(f.lengths);
  if (app.count("--long-lengths")) cfg.long_lengths = parse_length_list(f.long_lengths);
  if (app.count("--dims")) cfg.dims = f.dims;
  if (app.count("--a-max")) cfg.a_max = f.a_max;
  if (app.count("--types")) cfg.types = f.types;
  if (app.count("--pool-file")) cfg.pool_files = f.pool_files;
  if (app.count("--case")) cfg.cases = f.cases;
  if (app.count("--quad-nodes")) cfg.quad_nodes = f.quad_nodes;
  if (app.count("--workers")) cfg.workers = f.workers;
  if (f.dump_forms) cfg.dump_forms = true;
  if (app.count("--out-dir")) {
    cfg.out_dir = f.out_dir;
  } else if (cfg.out_dir.empty()) {
    const char* env = std::getenv("SBREL_OUT_DIR");
    cfg.out_dir = env && *env ? env : "sbrel_out";
  }
  cfg.finalize();
  Study::check_selection(cfg);
  return cfg;
}

struct ProphecyFlags {
  std::string pool;
  std::size_t from = 0;
  std::string to;
  std::size_t replicates = 200;
  std::uint64_t seed = 0;
  std::size_t quad_nodes = NormalRule::kDefaultNodes;
  unsigned workers = 1;
};

int prophecy(const ProphecyFlags& f, std::ostream& out) {
  ItemPool pool = [&] {
    try {
      return load_external_pool(f.pool);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }();
  if (f.from == 0) throw ConfigError("--from must be positive");
  std::vector<std::size_t> to = parse_length_list(f.to);
  std::set<std::size_t> all(to.begin(), to.end());
  if (all.count(0)) throw ConfigError("--to lengths must be positive");
  all.insert(f.from);

  StudyConfig sc;
  sc.lengths.assign(all.begin(), all.end());
  sc.replicates = f.replicates;
  sc.seed = f.seed;
  sc.quad_nodes = f.quad_nodes;
  sc.workers = f.workers;
  try {
    sc.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  const std::string id = fs::path(f.pool).stem().string();
  const CalibratedPool model(std::move(pool), NormalRule::grid(sc.quad_nodes));
  const CaseResult res = run_model({id, "external", model.num_dimensions(), 0.0}, model, sc);
  auto at = [&](std::size_t n) {
    return *std::find_if(res.by_length.begin(), res.by_length.end(), [n](const auto& a) { return a.n == n; });
  };
  const auto base = at(f.from);
  out << fmt::format("pool {}: {} items, {} dimension(s)\n", f.pool, model.pool_size(), model.num_dimensions());
  out << fmt::format("mean reliability at n={}: {} (sd over {} random forms: {})\n", f.from, r3(base.mean_rho),
                     sc.replicates, r3(base.sd_rho));
  out << "    n  predicted  simulated  difference\n";
  for (std::size_t n : to) {
    const double pred = predict(base.mean_rho, static_cast<std::int64_t>(f.from), static_cast<std::int64_t>(n));
    const double sim = at(n).mean_rho;
    out << fmt::format("{:>5}  {:>9}  {:>9}  {:>10}\n", n, r3(pred), r3(sim), fmt::format("{:+.3f}", pred - sim));
  }
  out << fmt::format("long-test limit of the rescaled reliability: {}\n", r3(model.limit().limit));
  if (model.num_dimensions() > 1) {
    out << fmt::format(
        "warning: the pool spans {} dimensions; short random forms overstate the rescaled reliability, so "
        "predictions to longer tests will easily be too optimistic\n",
        model.num_dimensions());
  }
  return kExitOk;
}

struct CasesFlags {
  std::string preset = "study1";
  std::vector<int> a_max{2};
  std::vector<int> types{1, 2, 3};
  std::uint64_t seed = 0;
  std::string out;
};

int export_cases(const CasesFlags& f, std::ostream& out) {
  json arr = json::array();
  if (f.preset == "study1") {
    for (int a : f.a_max) {
      if (a <= 0) throw ConfigError("a_max must be positive");
      for (const auto& c : study1_case_grid(a, f.seed)) arr.push_back(c);
    }
  } else if (f.preset == "study2") {
    for (int t : f.types) {
      if (t < 1 || t > 3) throw ConfigError(fmt::format("types must be 1, 2 or 3, got {}", t));
      for (const auto& c : study2_case_grid(t, f.seed)) arr.push_back(c);
    }
  } else {
    throw ConfigError("cases --preset must be study1 or study2");
  }
  if (f.out.empty()) {
    out << arr.dump(2) << '\n';
  } else {
    std::ofstream file(f.out, std::ios::binary | std::ios::trunc);
    file << arr.dump(2) << '\n';
    if (!file) throw Error("cannot write " + f.out);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-form reliability and Spearman-Brown simulations", "sbrel"};
  app.set_version_flag("--version", SBREL_VERSION);
  app.require_subcommand(1);

  StudyFlags sf;
  auto* study = app.add_subcommand("study", "Run a preset study and write CSV files plus a manifest");
  study->add_option("--preset", sf.preset, "table1, study1, study2, study3 or converge");
  study->add_option("--config", sf.config, "JSON config or a previous manifest.json");
  study->add_option("--seed", sf.seed, "Master seed");
  study->add_option("--replicates", sf.replicates, "Random forms per case (default 200)");
  study->add_option("--lengths", sf.lengths, "Test lengths, e.g. 10,20,30 or 10:50:5");
  study->add_option("--long-lengths", sf.long_lengths, "Lengths for converge (default 10,25,50,100,200,400)");
  study->add_option("--dims", sf.dims, "Dimension counts for beta cases (1,2,5)")->delimiter(',');
  study->add_option("--a-max", sf.a_max, "Upper discrimination bounds for beta cases")->delimiter(',');
  study->add_option("--types", sf.types, "study2 parameter distribution types (1,2,3)")->delimiter(',');
  study->add_option("--pool-file", sf.pool_files, "External a,b[,dim] pool file (repeatable)");
  study->add_option("--case", sf.cases, "Keep only case ids containing this text (repeatable)");
  study->add_option("--quad-nodes", sf.quad_nodes, "Grid quadrature nodes (default 401)");
  study->add_option("--workers", sf.workers, "Worker threads, 0 = all cores; results do not depend on it");
  study->add_option("--out-dir", sf.out_dir, "Output directory (default $SBREL_OUT_DIR or ./sbrel_out)");
  study->add_flag("--dump-forms", sf.dump_forms, "Also write the sampled forms");
  study->add_flag("--full-scale", sf.full_scale, "1000 replicates per case unless --replicates is given");

  ProphecyFlags pf;
  auto* proph = app.add_subcommand("prophecy", "Predict the mean reliability of longer or shorter random forms");
  proph->add_option("--pool", pf.pool, "Pool file with header a,b[,dim]")->required();
  proph->add_option("--from", pf.from, "Length with known mean reliability")->required();
  proph->add_option("--to", pf.to, "Target lengths, e.g. 25,50")->required();
  proph->add_option("--replicates", pf.replicates, "Random forms")->capture_default_str();
  proph->add_option("--seed", pf.seed, "Master seed")->capture_default_str();
  proph->add_option("--quad-nodes", pf.quad_nodes, "Grid quadrature nodes")->capture_default_str();
  proph->add_option("--workers", pf.workers, "Worker threads")->capture_default_str();

  CasesFlags cf;
  auto* cases = app.add_subcommand("cases", "Export a generated case grid as JSON");
  cases->add_option("--preset", cf.preset, "study1 or study2")->capture_default_str();
  cases->add_option("--a-max", cf.a_max, "study1 discrimination bounds")->capture_default_str()->delimiter(',');
  cases->add_option("--types", cf.types, "study2 types")->capture_default_str()->delimiter(',');
  cases->add_option("--seed", cf.seed, "Master seed")->capture_default_str();
  cases->add_option("--out", cf.out, "Output file (default stdout)");

  std::vector<std::string> argv_store{"sbrel"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0 through the same path.
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*study) {
      Study(resolve_study(*study, sf), out).run();
      return kExitOk;
    }
    if (*proph) return prophecy(pf, out);
    return export_cases(cf, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace sbrel::cli
