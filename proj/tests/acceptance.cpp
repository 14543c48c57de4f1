// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: acceptance [report-dir]

#include <iostream>

#include "hesslab/experiments.hpp"

int main(int argc, char** argv) {
  hesslab::SuiteOptions o;
  const auto results = hesslab::run_criteria(hesslab::suite_ids("all"), o);
  bool all = true;
  for (const auto& r : results) {
    std::cout << hesslab::summary_line(r) << "  (" << r.name << ", " << r.seconds << " s)\n";
    if (!r.note.empty()) std::cout << "    " << r.note << '\n';
    all = all && r.pass;
  }
  if (argc > 1) hesslab::write_reports(argv[1], results);
  return all ? 0 : 1;
}
