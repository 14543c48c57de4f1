#pragma once

// Experiment reports: CSV tables with round-trip number formatting and the
// one-line criterion summaries.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace hesslab {

class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> header);

  /// Throws DomainError when the row width differs from the header.
  void add(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  /// Header line, then rows in insertion order; doubles as {:.17g}.
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string csv_name;  // file name of the report, e.g. "c03_solver.csv"
  std::string csv;
  double seconds = 0.0;  // wall time; never part of the CSV
  std::string note;      // failure diagnostics
};

/// "PASS C<id> <measured> <bound>" (or FAIL).
std::string summary_line(const CriterionResult& r);

/// Writes every report into `dir` (created if missing).
void write_reports(const std::filesystem::path& dir, const std::vector<CriterionResult>& results);

}  // namespace hesslab
