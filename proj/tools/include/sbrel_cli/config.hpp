#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sbrel::cli {

/// Bad flags, unreadable or invalid configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Preset { Table1, Study1, Study2, Study3, Converge };

Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

/// Fully resolved run settings. Everything a study reads comes from here and
/// is written back into the manifest, so a manifest reproduces the run.
struct RunConfig {
  Preset preset = Preset::Table1;
  std::uint64_t seed = 0;
  std::size_t replicates = 200;
  std::vector<std::size_t> lengths;       // empty: preset default
  std::vector<std::size_t> long_lengths;  // converge only
  std::vector<int> dims;                  // study1/study3/converge cases
  std::vector<int> a_max;
  std::vector<int> types;  // study2/study3
  std::vector<std::string> pool_files;
  std::vector<std::string> cases;  // case-id substrings; empty keeps all
  std::size_t quad_nodes = 401;
  unsigned workers = 1;
  std::string out_dir;
  bool dump_forms = false;

  /// Fills preset defaults for unset lists and checks ranges.
  void finalize();
};

void to_json(nlohmann::json& j, const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, RunConfig& c);

/// Reads a config file, or the "config" member of a run manifest.
RunConfig load_config(const std::filesystem::path& path);

/// "10,15,20" or "10:50:5" (first:last:step).
std::vector<std::size_t> parse_length_list(const std::string& text);

}  // namespace sbrel::cli
