#include "sbrel_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sbrel/form_sampler.hpp"
#include "sbrel/quadrature.hpp"

namespace sbrel::cli {
namespace {

constexpr std::pair<Preset, const char*> kPresets[] = {{Preset::Table1, "table1"},
                                                       {Preset::Study1, "study1"},
                                                       {Preset::Study2, "study2"},
                                                       {Preset::Study3, "study3"},
                                                       {Preset::Converge, "converge"}};

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("'{}' is not a non-negative integer", s));
  }
  return v;
}

void check_increasing(const std::vector<std::size_t>& v, const char* what) {
  if (v.empty()) throw ConfigError(fmt::format("{} must not be empty", what));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0 || (i > 0 && v[i] <= v[i - 1])) {
      throw ConfigError(fmt::format("{} must be positive and strictly increasing", what));
    }
  }
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& into) {
  try {
    into = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
  }
}

}  // namespace

Preset parse_preset(const std::string& name) {
  for (const auto& [p, n] : kPresets) {
    if (name == n) return p;
  }
  throw ConfigError(fmt::format("unknown preset '{}' (table1, study1, study2, study3, converge)", name));
}

std::string preset_name(Preset p) {
  for (const auto& [q, n] : kPresets) {
    if (p == q) return n;
  }
  return "?";
}

std::vector<std::size_t> parse_length_list(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::size_t> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find(':', start);
      parts.push_back(parse_size(std::string_view(text).substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (parts.size() != 3 || parts[2] == 0 || parts[0] == 0 || parts[1] < parts[0]) {
      throw ConfigError(fmt::format("length range '{}' must be first:last:step", text));
    }
    return length_grid(parts[0], parts[1], parts[2]);
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    out.push_back(parse_size(std::string_view(text).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void RunConfig::finalize() {
  const bool study1_cases = preset == Preset::Study1 || preset == Preset::Study3 || preset == Preset::Converge;
  if (lengths.empty()) lengths = preset == Preset::Study1 ? length_grid(5, 50, 5) : length_grid(10, 50, 5);
  if (preset == Preset::Converge && long_lengths.empty()) long_lengths = {10, 25, 50, 100, 200, 400};
  if (dims.empty()) {
    if (preset == Preset::Study1) dims = {1, 2, 5};
    if (preset == Preset::Study3) dims = {1};
    if (preset == Preset::Converge) dims = {1, 5};
  }
  if (a_max.empty() && study1_cases) a_max = preset == Preset::Study1 ? std::vector<int>{2, 5} : std::vector<int>{2};
  if (types.empty() && (preset == Preset::Study2 || preset == Preset::Study3)) types = {1, 2, 3};
  if (cases.empty() && preset == Preset::Converge) cases = {"-aU2-b2"};

  if (replicates < 2) throw ConfigError("replicates must be at least 2");
  if (quad_nodes < NormalRule::kMinNodes) {
    throw ConfigError(fmt::format("quad_nodes must be at least {}", NormalRule::kMinNodes));
  }
  check_increasing(lengths, "lengths");
  if (preset == Preset::Converge) check_increasing(long_lengths, "long_lengths");
  for (int d : dims) {
    if (d != 1 && d != 2 && d != 5) throw ConfigError(fmt::format("dims must be 1, 2 or 5, got {}", d));
  }
  for (int a : a_max) {
    if (a <= 0) throw ConfigError(fmt::format("a_max must be positive, got {}", a));
  }
  for (int t : types) {
    if (t < 1 || t > 3) throw ConfigError(fmt::format("types must be 1, 2 or 3, got {}", t));
  }
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"preset", preset_name(c.preset)},
       {"seed", c.seed},
       {"replicates", c.replicates},
       {"lengths", c.lengths},
       {"long_lengths", c.long_lengths},
       {"dims", c.dims},
       {"a_max", c.a_max},
       {"types", c.types},
       {"pool_files", c.pool_files},
       {"cases", c.cases},
       {"quad_nodes", c.quad_nodes},
       {"workers", c.workers},
       {"out_dir", c.out_dir},
       {"dump_forms", c.dump_forms}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "preset") {
      std::string name;
      read(j, "preset", name);
      c.preset = parse_preset(name);
    } else if (key == "seed") {
      read(j, "seed", c.seed);
    } else if (key == "replicates") {
      read(j, "replicates", c.replicates);
    } else if (key == "lengths") {
      read(j, "lengths", c.lengths);
    } else if (key == "long_lengths") {
      read(j, "long_lengths", c.long_lengths);
    } else if (key == "dims") {
      read(j, "dims", c.dims);
    } else if (key == "a_max") {
      read(j, "a_max", c.a_max);
    } else if (key == "types") {
      read(j, "types", c.types);
    } else if (key == "pool_files") {
      read(j, "pool_files", c.pool_files);
    } else if (key == "cases") {
      read(j, "cases", c.cases);
    } else if (key == "quad_nodes") {
      read(j, "quad_nodes", c.quad_nodes);
    } else if (key == "workers") {
      read(j, "workers", c.workers);
    } else if (key == "out_dir") {
      read(j, "out_dir", c.out_dir);
    } else if (key == "dump_forms") {
      read(j, "dump_forms", c.dump_forms);
    } else {
      throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  // A run manifest carries its resolved config under "config".
  if (j.is_object() && j.contains("config") && j.contains("tool")) j = j.at("config");
  RunConfig c;
  try {
    from_json(j, c);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return c;
}

}  // namespace sbrel::cli
