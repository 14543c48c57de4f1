#include "hesslab/report.hpp"

#include <fstream>

#include <fmt/format.h>

#include "hesslab/error.hpp"

namespace hesslab {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw DomainError("CsvTable: row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t k = 0; k < header_.size(); ++k) {
    if (k) out += ',';
    out += header_[k];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      if (const double* d = std::get_if<double>(&row[k])) out += fmt::format("{:.17g}", *d);
      else if (const long long* i = std::get_if<long long>(&row[k])) out += fmt::format("{}", *i);
      else out += std::get<std::string>(row[k]);
    }
    out += '\n';
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  return fmt::format("{} C{} {:.6g} {:.6g}", r.pass ? "PASS" : "FAIL", r.id, r.measured, r.bound);
}

void write_reports(const std::filesystem::path& dir, const std::vector<CriterionResult>& results) {
  std::filesystem::create_directories(dir);
  for (const auto& r : results) {
    if (r.csv_name.empty()) continue;
    std::ofstream os(dir / r.csv_name, std::ios::binary);
    if (!os) throw DomainError(fmt::format("cannot write {}", (dir / r.csv_name).string()));
    os << r.csv;
  }
}

}  // namespace hesslab
