#pragma once

// The numbered acceptance criteria as runnable experiments. Each criterion
// owns its solver instances and random stream, so results do not depend on
// which other criteria run in the same process.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hesslab/potential.hpp"
#include "hesslab/report.hpp"

namespace hesslab {

struct SuiteOptions {
  std::uint64_t seed = 7;
  long samples = 100000;   // cone samples per (n,m) pair
  long instances = 10000;  // brute-force instances per oracle
};

struct CriterionInfo {
  int id;
  std::string suite;  // CLI suite name
  std::string name;
};

const std::vector<CriterionInfo>& criteria();

/// Criterion ids of a suite name; "all" selects every criterion.
/// Throws DomainError on an unknown name.
std::vector<int> suite_ids(const std::string& suite);

CriterionResult run_criterion(int id, const SuiteOptions& o);

/// Runs the ids in increasing order. Id 12 reruns criteria 1..11 and compares
/// the CSV bytes with the first pass.
std::vector<CriterionResult> run_criteria(std::vector<int> ids, const SuiteOptions& o);

struct ShellGrowth {
  double q = 0.0;
  double expected = 0.0;  // growth exponent of the shell integral in 1/delta
  ExponentFit fit;
};

/// Integrals of |G|^q over the shells delta <= |z| < 2 delta for
/// delta = 1/2, ..., 1/32, fitted against 1/delta.
std::vector<ShellGrowth> integrability_sweep(int n, int m, std::span<const double> qs, std::uint64_t seed);

/// Independent check of the discrete Poisson problem (1/4) sum_a D_aa u = f
/// with u = phi on the boundary: plain conjugate gradients on explicit
/// neighbor loops.
GridField reference_poisson(const GridField& f, const GridField& phi, double tol = 1e-14);

}  // namespace hesslab
