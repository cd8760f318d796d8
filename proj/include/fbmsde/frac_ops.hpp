#pragma once

#include "fbmsde/grid.hpp"
#include "fbmsde/hurst.hpp"

namespace fbmsde {

/// Left Riemann-Liouville fractional integral I^alpha of order alpha in
/// (0, 1], discretized by product integration: the integrand is interpolated
/// piecewise-linearly and integrated exactly against the power kernel.
GridFunction frac_integral(double alpha, const GridFunction& f);

/// Left Riemann-Liouville fractional derivative of order alpha in (0, 1),
/// realized as d/dx applied to I^{1-alpha} f. Central differences in the
/// interior, one-sided at the endpoints. Accurate for f with f(0) = 0.
GridFunction frac_derivative(double alpha, const GridFunction& f);

/// Pointwise multiplication by s^p. The s = 0 value is set by continuous
/// extension: 0 when p > 0 or when f(0) = 0, otherwise f(0) for p = 0;
/// for p < 0 the origin value is defined as 0 (all uses here have the
/// composite vanish at the origin).
GridFunction multiply_power(const GridFunction& f, double p);

/// Normalization constant c_H Gamma(H + 1/2) relating the fractional
/// composition I^{2H} s^{1/2-H} I^{1/2-H} s^{H-1/2} to the Volterra kernel
/// integral: (K_H f)(t) = Integral over [0,t] of K_H(t,s) f(s) ds equals
/// kh_scale(h) times the composition. Here c_H is the kernel constant
/// sqrt(2H / ((1-2H) B(1-2H, H+1/2))).
double kh_scale(const HurstParam& h);

/// The isomorphism K_H, normalized so that (K_H f)(t) equals the integral of
/// the Volterra kernel K_H(t,s) against f over [0,t]:
///   K_H f = kh_scale(h) * I^{2H} s^{1/2-H} I^{1/2-H} s^{H-1/2} f.
GridFunction op_KH(const GridFunction& f, const HurstParam& h);

/// Inverse of K_H for absolutely continuous f with derivative f_derivative:
/// kh_scale(h)^{-1} s^{H-1/2} I^{1/2-H} s^{1/2-H} f'(s). The caller supplies
/// f' directly.
GridFunction op_KH_inverse_ac(const GridFunction& f_derivative, const HurstParam& h);

/// General inverse of K_H: kh_scale(h)^{-1} s^{1/2-H} D^{1/2-H} s^{H-1/2}
/// D^{2H} f. Stable for f with f(0) = 0 and continuous f'; rougher inputs
/// should use the absolutely-continuous form.
GridFunction op_KH_inverse_general(const GridFunction& f, const HurstParam& h);

/// The Volterra-adjoint operator
///   (K_H* f)(s) = K_H(b,s) f(s) + Integral over [s,b] of
///                 (f(t) - f(s)) dK_H/dt (t,s) dt,
/// with b an explicit right endpoint (defaulting to the grid horizon).
/// Evaluated at interior grid points; the s = 0 and s = b values are 0.
GridFunction op_KH_star(const GridFunction& f, const HurstParam& h, double endpoint_b);
GridFunction op_KH_star(const GridFunction& f, const HurstParam& h);

}  // namespace fbmsde
