#pragma once

// Matrix-free Krylov solvers with a diagonal (Jacobi) preconditioner.

#include <functional>
#include <span>

namespace hesslab {

using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

struct KrylovResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct KrylovOptions {
  double tol = 1e-10;  // on ||b - A x|| / ||b||
  int max_iter = 5000;
};

/// Preconditioned conjugate gradients; A must be symmetric positive definite.
/// inv_diag holds the inverse diagonal (0 freezes a component).
KrylovResult conjugate_gradient(const LinearMap& a, std::span<const double> inv_diag, std::span<const double> b,
                                std::span<double> x, const KrylovOptions& opt = {});

/// Right-preconditioned BiCGSTAB for nonsymmetric A.
KrylovResult bicgstab(const LinearMap& a, std::span<const double> inv_diag, std::span<const double> b,
                      std::span<double> x, const KrylovOptions& opt = {});

}  // namespace hesslab
