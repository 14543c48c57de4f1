#pragma once

// High-accuracy radial solutions of sigma_m = f(|z|^2). With w = g'(t), the
// radial operator is a total derivative,
//   sigma_m = C(n-1,m-1)/m * t^{1-n} (t^n w^m)',
// so w is obtained by quadrature and g by one more quadrature. Values are
// tabulated at 10^4 intervals and interpolated by cubic Hermite pieces.

#include <functional>

#include "hesslab/radial.hpp"

namespace hesslab {

using RadialDensity = std::function<double(double)>;

/// Solution on [0, t_out] regular at the origin (g' bounded), g(t_out) = g_out.
RadialProfile solve_radial(const RadialDensity& f, int m, int n, double t_out, double g_out);

/// Solution on the annulus [t_in, t_out] with g(t_in) = g_in < g(t_out) = g_out.
/// flux, when given, receives the constant t^n w^m at t_in.
RadialProfile solve_radial_annulus(const RadialDensity& f, int m, int n, double t_in, double g_in, double t_out,
                                   double g_out, double* flux = nullptr);

/// Form-normalized capacity of the ball |z| <= r inside |z| < R.
double radial_ball_capacity(int n, int m, double r, double R);

}  // namespace hesslab
