#pragma once

#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/grid.hpp"
#include "fbmsde/hurst.hpp"
#include "fbmsde/sde.hpp"

namespace fbmsde {

/// Per-path record of the measure-change quantities.
struct GirsanovRecord {
    std::vector<GridFunction> v;  // per dimension
    double log_inv_density = 0.0; // log Z_T^{-1}
    double v_l2_sq = 0.0;         // Integral over [0,T] of |v_s|^2 ds
    const CoupledPath* driver = nullptr;
    double drift_sup = 0.0;
};

/// v = K_H^{-1}( Integral of b(r, X_r) dr ), evaluated per dimension through
/// the absolutely-continuous inverse with derivative s -> b(s, X_s).
std::vector<GridFunction> compute_v(const DriftField& b, const SolutionPath& x,
                                    const HurstParam& h);

/// Pointwise bound |v_s| <= ||b||_inf * (Gamma(3/2-H)/Gamma(2-2H)) * s^{1/2-H}.
double v_bound(const HurstParam& h, double b_sup, double s);

/// exp( C_H T^{2(1-H)} ||b||_inf^2 / 2 ) with C_H = (Gamma(3/2-H)/Gamma(2-2H))^2.
/// Throws on overflow rather than returning infinity.
double exp_moment_bound(const HurstParam& h, double b_sup, double horizon_T);

/// log Z_T^{-1} = -(Ito sum of v dW) - (trapezoidal Integral of |v|^2 dt)/2,
/// summed over dimensions; the Ito sum uses left-point evaluation.
double log_inv_density(const std::vector<GridFunction>& v, const CoupledPath& driver);

/// Trapezoidal Integral over [0,T] of |v_s|^2 ds summed over dimensions.
double v_l2_sq(const std::vector<GridFunction>& v);

/// Full per-path record.
GirsanovRecord girsanov_record(const DriftField& b, const SolutionPath& x, const HurstParam& h);

/// Closed form of the Gaussian occupation integral
///   Integral over R^d of (2 pi t^{2H})^{-d g'/2} exp(-g' |y-x|^2 / (2 t^{2H})) dy
/// = (2 pi)^{d(1-g')/2} g'^{-d/2} t^{(1-g') d H},  independent of x.
double gaussian_occupation(double gamma_prime, const HurstParam& h, int dim, double t);

/// Nonnegative space-time lattice function g on [0,T] x box, stored row-major
/// over (time, space cells) with uniform cell volume.
struct LatticeFunction {
    double horizon_T = 0.0;
    double cell_volume = 0.0;          // spatial cell volume
    std::size_t n_time = 0;            // time samples
    std::size_t n_cells = 0;           // spatial cells
    std::vector<double> values;        // n_time * n_cells, g >= 0
};

/// Right side of the Krylov-type inequality: the L^beta space-time norm
/// ( Integral of g^beta dx dt )^{1/beta}, beta > 1 + dim*H.
double krylov_rhs(const LatticeFunction& g, double beta, const HurstParam& h);

}  // namespace fbmsde
