#include "sbrel/pool_gen.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sbrel/errors.hpp"

namespace sbrel {

Beta4Spec Beta4Spec::from_mean(double mean, double shape_sum, double min, double max) {
  if (!(max > min) || !(shape_sum > 0.0) || !(mean > min && mean < max)) {
    throw ParameterError(fmt::format("no beta with mean {} on ({}, {}) and alpha+beta = {}", mean,
                                     min, max, shape_sum));
  }
  const double alpha = shape_sum * (mean - min) / (max - min);
  return Beta4Spec{alpha, shape_sum - alpha, min, max};
}

void Beta4Spec::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ParameterError(fmt::format("beta shape parameters must be positive, got ({}, {})", alpha, beta));
  }
  if (!(max > min) || !std::isfinite(min) || !std::isfinite(max)) {
    throw ParameterError(fmt::format("beta support must satisfy min < max, got [{}, {}]", min, max));
  }
}

double DiscreteSpec::mean() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
  return m;
}

void DiscreteSpec::validate() const {
  if (values.empty() || values.size() != probs.size()) {
    throw ParameterError("discrete table needs matching, non-empty values and probabilities");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ParameterError("discrete probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ParameterError(fmt::format("discrete probabilities sum to {:.17g}, not 1", total));
  }
}

double distribution_mean(const ParamDistribution& d) {
  return std::visit([](const auto& s) { return s.mean(); }, d);
}

double sample_beta4(const Beta4Spec& spec, Engine& rng) {
  spec.validate();
  std::gamma_distribution<double> gx(spec.alpha, 1.0);
  std::gamma_distribution<double> gy(spec.beta, 1.0);
  const double x = gx(rng);
  const double y = gy(rng);
  // Both gammas can underflow for tiny shapes; fall back on the side with mass.
  double u;
  if (x + y > 0.0) {
    u = x / (x + y);
  } else {
    u = spec.alpha >= spec.beta ? 1.0 : 0.0;
  }
  return spec.min + (spec.max - spec.min) * u;
}

double sample_param(const ParamDistribution& d, Engine& rng) {
  if (const auto* beta = std::get_if<Beta4Spec>(&d)) return sample_beta4(*beta, rng);
  const auto& disc = std::get<DiscreteSpec>(d);
  disc.validate();
  std::discrete_distribution<std::size_t> pick(disc.probs.begin(), disc.probs.end());
  return disc.values[pick(rng)];
}

std::vector<PoolCaseSpec> study1_case_grid(int a_max, std::uint64_t seed) {
  if (a_max <= 0) throw ParameterError("a_max must be positive");
  const double amax = a_max;
  const double a_fractions[] = {1.0 / 6.0, 0.5, 5.0 / 6.0};
  const double b_means[] = {-1.0, 0.0, 1.0};
  struct Shape {
    char tag;
    double sum;
  };
  const Shape shapes[] = {{'U', 12.0}, {'J', 2.0}};

  std::vector<PoolCaseSpec> out;
  for (int dims : {1, 2, 5}) {
    for (const Shape& shape : shapes) {
      for (int ai = 0; ai < 3; ++ai) {
        for (int bi = 0; bi < 3; ++bi) {
          PoolCaseSpec c;
          c.case_id = fmt::format("s1-d{}-amax{}-a{}{}-b{}", dims, a_max, shape.tag, ai + 1, bi + 1);
          c.family = "beta";
          c.num_dimensions = dims;
          c.pool_size = 1000;
          c.a_max = amax;
          c.a_spec = Beta4Spec::from_mean(a_fractions[ai] * amax, shape.sum, 0.0, amax);
          c.b_spec = Beta4Spec::from_mean(b_means[bi], 4.0, -2.0, 2.0);
          c.seed = seed;
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

std::vector<PoolCaseSpec> study2_case_grid(int type, std::uint64_t seed) {
  std::vector<PoolCaseSpec> out;
  if (type == 1 || type == 2) {
    const double b_low = type == 1 ? -1.7 : 0.0;
    for (int pa : {10, 30, 50, 70, 90}) {
      for (int pb : {10, 50, 90}) {
        PoolCaseSpec c;
        c.case_id = fmt::format("s2t{}-pa{}-pb{}", type, pa, pb);
        c.family = fmt::format("binary{}", type);
        c.pool_size = 1000;
        c.a_spec = DiscreteSpec{{0.5, 2.0}, {pa / 100.0, 1.0 - pa / 100.0}};
        c.b_spec = DiscreteSpec{{b_low, 1.7}, {pb / 100.0, 1.0 - pb / 100.0}};
        c.seed = seed;
        out.push_back(std::move(c));
      }
    }
    return out;
  }
  if (type == 3) {
    for (int i = 1; i <= 100; ++i) {
      PoolCaseSpec c;
      c.case_id = fmt::format("s2t3-{:03d}", i);
      c.family = "irregular";
      c.pool_size = 10;
      c.a_spec = Beta4Spec{1.0, 1.0, 0.5, 2.0};
      c.b_spec = Beta4Spec{1.0, 1.0, -2.0, 2.0};
      c.seed = seed;
      out.push_back(std::move(c));
    }
    return out;
  }
  throw ParameterError(fmt::format("study 2 distribution type must be 1, 2 or 3, got {}", type));
}

ItemPool build_pool(const PoolCaseSpec& spec) {
  if (spec.pool_size == 0) throw ParameterError(spec.case_id + ": pool size must be positive");
  if (spec.num_dimensions < 1) throw ParameterError(spec.case_id + ": need at least one dimension");
  std::visit([](const auto& s) { s.validate(); }, spec.a_spec);
  std::visit([](const auto& s) { s.validate(); }, spec.b_spec);

  Engine rng = RandomStream(spec.seed).child(spec.case_id).child("pool").engine();
  std::uniform_int_distribution<int> pick_dim(1, spec.num_dimensions);
  std::vector<ItemParams> items(spec.pool_size);
  for (ItemParams& it : items) {
    it.dim = pick_dim(rng);
    do {
      it.a = sample_param(spec.a_spec, rng);
    } while (!(it.a > 0.0));
    it.b = sample_param(spec.b_spec, rng);
  }
  return ItemPool(LatentSpec{spec.num_dimensions}, std::move(items));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no, std::string_view column) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(fmt::format("column {}: '{}' is not a number", column, field), line_no);
  }
  if (!std::isfinite(v)) throw ParseError(fmt::format("column {}: value is not finite", column), line_no);
  return v;
}

}  // namespace

ItemPool parse_pool_text(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  char delim = ',';
  bool have_header = false;
  bool has_dim = false;
  std::vector<ItemParams> items;
  int max_dim = 1;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty() || line.front() == '#') continue;

    if (!have_header) {
      for (char d : {',', '\t', ';'}) {
        if (line.find(d) != std::string_view::npos) {
          delim = d;
          break;
        }
      }
      const auto cols = split(line, delim);
      if (cols.size() == 2 && cols[0] == "a" && cols[1] == "b") {
        has_dim = false;
      } else if (cols.size() == 3 && cols[0] == "a" && cols[1] == "b" && cols[2] == "dim") {
        has_dim = true;
      } else {
        throw ParseError("header must be 'a,b' or 'a,b,dim'", line_no);
      }
      have_header = true;
      continue;
    }

    const auto cols = split(line, delim);
    const std::size_t expected = has_dim ? 3 : 2;
    if (cols.size() != expected) {
      throw ParseError(fmt::format("expected {} fields, found {}", expected, cols.size()), line_no);
    }
    ItemParams it;
    it.a = parse_number(cols[0], line_no, "a");
    it.b = parse_number(cols[1], line_no, "b");
    if (!(it.a > 0.0)) {
      throw ParameterError(fmt::format("line {}: discrimination must be > 0, got {}", line_no, it.a));
    }
    if (has_dim) {
      const double d = parse_number(cols[2], line_no, "dim");
      if (d < 1.0 || d != std::floor(d) || d > 1e6) {
        throw ParseError(fmt::format("dim must be a positive integer, got {}", cols[2]), line_no);
      }
      it.dim = static_cast<int>(d);
      max_dim = std::max(max_dim, it.dim);
    }
    items.push_back(it);
  }
  if (!have_header) throw ParseError("missing header 'a,b'", 0);
  if (items.empty()) throw ParseError("pool file lists no items", 0);
  return ItemPool(LatentSpec{max_dim}, std::move(items));
}

ItemPool load_external_pool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open pool file " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pool_text(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.line());
  }
}

namespace {

nlohmann::json dist_to_json(const ParamDistribution& d) {
  if (const auto* b = std::get_if<Beta4Spec>(&d)) {
    return {{"kind", "beta4"}, {"alpha", b->alpha}, {"beta", b->beta}, {"min", b->min}, {"max", b->max},
            {"mean", b->mean()}};
  }
  const auto& t = std::get<DiscreteSpec>(d);
  return {{"kind", "discrete"}, {"values", t.values}, {"probs", t.probs}, {"mean", t.mean()}};
}

ParamDistribution dist_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "beta4") {
    return Beta4Spec{j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("min").get<double>(),
                     j.at("max").get<double>()};
  }
  if (kind == "discrete") {
    return DiscreteSpec{j.at("values").get<std::vector<double>>(), j.at("probs").get<std::vector<double>>()};
  }
  throw ParseError("unknown distribution kind '" + kind + "'", 0);
}

}  // namespace

void to_json(nlohmann::json& j, const PoolCaseSpec& spec) {
  j = {{"case_id", spec.case_id},
       {"family", spec.family},
       {"num_dimensions", spec.num_dimensions},
       {"pool_size", spec.pool_size},
       {"a_max", spec.a_max},
       {"a", dist_to_json(spec.a_spec)},
       {"b", dist_to_json(spec.b_spec)},
       {"seed", spec.seed}};
}

void from_json(const nlohmann::json& j, PoolCaseSpec& spec) {
  spec.case_id = j.at("case_id").get<std::string>();
  spec.family = j.value("family", std::string{});
  spec.num_dimensions = j.at("num_dimensions").get<int>();
  spec.pool_size = j.at("pool_size").get<std::size_t>();
  spec.a_max = j.value("a_max", 0.0);
  spec.a_spec = dist_from_json(j.at("a"));
  spec.b_spec = dist_from_json(j.at("b"));
  spec.seed = j.value("seed", std::uint64_t{0});
}

}  // namespace sbrel
