#pragma once

// Damped Newton iteration for  F(u) = S_m(lambda(Hu))^{1/m} - f^{1/m} = 0  at
// interior points with u = psi at boundary points. Boundary values are part of
// the Newton update, so the iteration may start from a state that does not
// match psi yet.

#include <vector>

#include "hesslab/grid.hpp"
#include "hesslab/stencil_operator.hpp"

namespace hesslab {

struct NewtonProblem {
  DomainPtr domain;
  int m = 1;
  std::vector<double> f_root;  // full grid; f^{1/m} at interior points (f itself when m = 1)
  std::vector<double> psi;     // full grid; boundary targets
};

struct NewtonSettings {
  int max_iter = 60;
  double tol = 1e-8;
  double damping = 1.0;
  double linear_tol = 1e-10;
  int max_linear_iter = 20000;
};

struct NewtonTrace {
  std::vector<double> residual;
  std::vector<double> step;
  std::vector<int> violations;
  int iterations = 0;
  long linear_iterations = 0;
  bool converged = false;
};

/// Point-wise state of an iterate.
struct NewtonEvaluation {
  std::vector<double> F;      // per interior ordinal
  std::vector<double> scale;  // dF/d tr(C H) = (1/m) S_m^{1/m - 1}
  double residual = 0.0;      // sup |F| (infinite when some point is inadmissible)
  double mismatch = 0.0;      // sup |psi - u| on the boundary
  int violations = 0;         // interior points outside the open cone (m >= 2)
};

/// Evaluates F; when `op` is given, also stores the frozen coefficients
/// C(p) = d S_m / dH at each admissible point.
NewtonEvaluation newton_evaluate(const NewtonProblem& p, const std::vector<double>& u, StencilOperator* op);

/// Updates u in place. Throws SolverError if the start is inadmissible or
/// backtracking cannot find an admissible, non-increasing step.
NewtonTrace newton_dirichlet(const NewtonProblem& p, std::vector<double>& u, const NewtonSettings& s);

}  // namespace hesslab
