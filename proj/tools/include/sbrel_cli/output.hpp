#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sbrel/harness.hpp"

namespace sbrel::cli {

/// Round-trip formatting used in every data file.
std::string num(double x);

/// Minimal CSV writer. Fields are written as given; callers only pass
/// identifiers and numbers, none of which need quoting.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_aggregates(const std::filesystem::path& path, const std::string& study,
                      const std::vector<CaseResult>& cases);
void write_prediction_errors(const std::filesystem::path& path, const std::vector<PredictionErrorReport>& reports);
void write_forms(const std::filesystem::path& path, const std::vector<CaseResult>& cases);

}  // namespace sbrel::cli
