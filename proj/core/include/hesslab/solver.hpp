#pragma once

// Dirichlet problems sigma_m(u_{z_j zbar_k}) = f on boxes and balls, the
// degenerate (maximal) problem f = 0, and the periodic problem
// sigma_m(I + u_{z_j zbar_k}) = f on the flat torus.
//
// All densities are raw sigma_m (Normalization::raw) unless stated otherwise.

#include <iosfwd>
#include <string>
#include <vector>

#include "hesslab/field.hpp"

namespace hesslab {

struct SolveConfig {
  int max_iter = 60;              // Newton iterations per solve
  double tol_residual = 1e-8;     // sup |S_m^{1/m} - f^{1/m}| at interior points
  double damping = 1.0;           // first trial step of the line search
  double admissibility_margin = 0.0;  // final certificate: S_k > -(margin + tol_residual)
  std::vector<double> degenerate_lift;  // explicit lift levels; empty = halving sequence
  double lift_min = 1e-4;         // halving stops below lift_min * first level
  double lift_start = 1.0;        // first level when sup f = 0
  double linear_tol = 1e-10;
  int max_linear_iter = 20000;
  double stage_tol = 1e-3;        // relative tolerance of intermediate continuation stages
  double min_stage_step = 1.0 / 1024.0;
};

struct SolveReport {
  GridField solution;
  std::vector<double> residual_history;  // one entry per Newton iterate, start included
  std::vector<double> step_history;      // accepted step length (0 for the starting point)
  std::vector<int> admissibility;        // interior points outside the cone, per iterate
  bool converged = false;
  int wall_iterations = 0;               // Newton iterations over all stages and lifts
  long linear_iterations = 0;
  int stages = 0;                        // continuation stages
  double final_residual = 0.0;
  int final_violations = 0;
  Normalization normalization = Normalization::raw;
  /// Torus only: the scalar e^c with sigma_m(I + Hu) = e^c f~; 1 elsewhere.
  double kappa = 1.0;
  /// Degenerate lift levels actually used and the largest pointwise increase
  /// u_{k} - u_{k+1} between consecutive levels (<= 0 means monotone).
  std::vector<double> lift_levels;
  double lift_monotonicity_defect = 0.0;
};

/// f is sampled on the interior of phi's domain; phi supplies boundary values
/// (and interior values, if finite, as the starting guess).
SolveReport solve_dirichlet(const GridField& f, const GridField& phi, int m, const SolveConfig& cfg = {});

/// f = 0 through the lift f = eps_k, eps_k decreasing, warm-started.
SolveReport maximal_solution(const GridField& phi, int m, const SolveConfig& cfg = {});

/// f > 0 on a torus domain, rescaled to mean C(n,m). The solution satisfies
/// max u = 0.
SolveReport solve_torus(const GridField& f, int m, const SolveConfig& cfg = {});

/// Linear problem sum_j u_{z_j zbar_j} = f with u = phi on the boundary.
GridField poisson_dirichlet(const GridField& f, const GridField& phi, double tol = 1e-12);

/// Rows "iter,residual,step,violations".
void write_iteration_csv(std::ostream& os, const SolveReport& r);

/// Sup-norm residual |S_m(lambda(Hu))^{1/m} - f^{1/m}| over interior points
/// (torus: lambda(I + Hu) against kappa f~).
double dirichlet_residual(const GridField& u, const GridField& f, int m);

}  // namespace hesslab
