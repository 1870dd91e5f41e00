#include "sbrel_cli/output.hpp"

#include <fmt/format.h>

#include "sbrel/errors.hpp"

namespace sbrel::cli {

std::string num(double x) { return fmt::format("{:.17g}", x); }

CsvFile::CsvFile(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error("cannot write " + path.string());
  row(header);
}

void CsvFile::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
  if (!out_) throw Error("write failed for " + path_.string());
}

void write_aggregates(const std::filesystem::path& path, const std::string& study,
                      const std::vector<CaseResult>& cases) {
  CsvFile csv(path, {"study", "case_id", "dims", "a_max", "n", "mean_rho", "median_rho", "sd_rho", "mean_rescaled",
                     "limit", "bias"});
  for (const auto& c : cases) {
    for (const auto& a : c.by_length) {
      csv.row({study, c.case_id, std::to_string(c.num_dimensions), num(c.a_max), std::to_string(a.n),
               num(a.mean_rho), num(a.median_rho), num(a.sd_rho), num(a.mean_rescaled), num(a.limit),
               num(a.bias)});
    }
  }
}

void write_prediction_errors(const std::filesystem::path& path, const std::vector<PredictionErrorReport>& reports) {
  CsvFile csv(path, {"case_id", "n_from", "n_to", "direction", "error"});
  for (const auto& r : reports) {
    for (const auto& p : r.pairs) {
      csv.row({r.case_id, std::to_string(p.n_from), std::to_string(p.n_to), p.forward ? "forward" : "backward",
               num(p.error)});
    }
  }
}

void write_forms(const std::filesystem::path& path, const std::vector<CaseResult>& cases) {
  std::size_t width = 0;
  for (const auto& c : cases) {
    for (const auto& f : c.forms) width = std::max(width, f.size());
  }
  std::vector<std::string> header{"case_id", "replicate"};
  for (std::size_t i = 1; i <= width; ++i) header.push_back(fmt::format("item_{}", i));
  CsvFile csv(path, header);
  for (const auto& c : cases) {
    for (std::size_t r = 0; r < c.forms.size(); ++r) {
      std::vector<std::string> fields{c.case_id, std::to_string(r)};
      for (std::size_t item : c.forms[r]) fields.push_back(std::to_string(item));
      csv.row(fields);
    }
  }
}

}  // namespace sbrel::cli
