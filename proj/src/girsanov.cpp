#include "fbmsde/girsanov.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmsde/frac_ops.hpp"

namespace fbmsde {

std::vector<GridFunction> compute_v(const DriftField& b, const SolutionPath& x,
                                    const HurstParam& h) {
    const std::size_t n = x.grid.n_steps();
    // Sample s -> b(s, X_s) once, then invert per dimension.
    std::vector<GridFunction> integrand(std::size_t(x.dim), GridFunction(x.grid));
    for (std::size_t i = 0; i <= n; ++i) {
        Point bv = b(x.grid.t(i), x.values[i]);
        for (int d = 0; d < x.dim; ++d) integrand[std::size_t(d)].values[i] = bv[std::size_t(d)];
    }
    std::vector<GridFunction> v;
    v.reserve(std::size_t(x.dim));
    for (int d = 0; d < x.dim; ++d) v.push_back(op_KH_inverse_ac(integrand[std::size_t(d)], h));
    return v;
}

double v_bound(const HurstParam& h, double b_sup, double s) {
    if (s < 0.0) throw std::domain_error("v_bound: s must be >= 0");
    double H = h.h();
    double ratio =
        std::exp(std::lgamma(1.5 - H) - std::lgamma(2.0 - 2.0 * H)) / kh_scale(h);
    return b_sup * ratio * std::pow(s, 0.5 - H);
}

double exp_moment_bound(const HurstParam& h, double b_sup, double horizon_T) {
    if (!(horizon_T > 0.0)) throw std::domain_error("exp_moment_bound: horizon must be > 0");
    double H = h.h();
    double ratio =
        std::exp(std::lgamma(1.5 - H) - std::lgamma(2.0 - 2.0 * H)) / kh_scale(h);
    double arg = 0.5 * ratio * ratio * std::pow(horizon_T, 2.0 * (1.0 - H)) * b_sup * b_sup;
    if (arg > 700.0) throw std::overflow_error("exp_moment_bound: exponent overflows double range");
    return std::exp(arg);
}

double log_inv_density(const std::vector<GridFunction>& v, const CoupledPath& driver) {
    if (v.size() != std::size_t(driver.dim))
        throw std::invalid_argument("log_inv_density: dimension mismatch");
    double ito = 0.0, l2 = 0.0;
    const std::size_t n = driver.grid.n_steps();
    const double dt = driver.grid.dt();
    for (std::size_t d = 0; d < v.size(); ++d) {
        if (!(v[d].grid == driver.grid))
            throw std::invalid_argument("log_inv_density: grid mismatch");
        const auto& vals = v[d].values;
        const auto& w = driver.w[d];
        for (std::size_t i = 0; i < n; ++i) {
            ito += vals[i] * (w[i + 1] - w[i]);
            l2 += 0.5 * (vals[i] * vals[i] + vals[i + 1] * vals[i + 1]) * dt;
        }
    }
    return -ito - 0.5 * l2;
}

double v_l2_sq(const std::vector<GridFunction>& v) {
    double l2 = 0.0;
    for (const auto& g : v) {
        const double dt = g.grid.dt();
        for (std::size_t i = 0; i < g.grid.n_steps(); ++i)
            l2 += 0.5 * (g.values[i] * g.values[i] + g.values[i + 1] * g.values[i + 1]) * dt;
    }
    return l2;
}

GirsanovRecord girsanov_record(const DriftField& b, const SolutionPath& x, const HurstParam& h) {
    GirsanovRecord rec;
    rec.v = compute_v(b, x, h);
    rec.driver = x.driver;
    rec.drift_sup = b.sup_norm();
    rec.v_l2_sq = v_l2_sq(rec.v);
    if (x.driver == nullptr)
        throw std::invalid_argument("girsanov_record: solution has no driver attached");
    rec.log_inv_density = log_inv_density(rec.v, *x.driver);
    return rec;
}

double gaussian_occupation(double gamma_prime, const HurstParam& h, int dim, double t) {
    if (!(t > 0.0)) throw std::domain_error("gaussian_occupation: t must be > 0");
    if (!(gamma_prime >= 1.0))
        throw std::domain_error("gaussian_occupation: gamma' must be >= 1");
    if (dim < 1) throw std::domain_error("gaussian_occupation: dim must be >= 1");
    double d = double(dim);
    double two_pi = 2.0 * 3.14159265358979323846;
    return std::pow(two_pi, 0.5 * d * (1.0 - gamma_prime)) * std::pow(gamma_prime, -0.5 * d) *
           std::pow(t, (1.0 - gamma_prime) * d * h.h());
}

double krylov_rhs(const LatticeFunction& g, double beta, const HurstParam& h) {
    if (!(beta > 1.0 + double(h.dim()) * h.h()))
        throw std::domain_error("krylov_rhs: beta must exceed 1 + d*H");
    if (g.values.size() != g.n_time * g.n_cells)
        throw std::invalid_argument("krylov_rhs: lattice size mismatch");
    if (g.n_time == 0 || g.n_cells == 0) return 0.0;
    double dt = g.horizon_T / double(g.n_time);
    double acc = 0.0;
    for (double val : g.values) {
        if (val < 0.0) throw std::domain_error("krylov_rhs: g must be nonnegative");
        acc += std::pow(val, beta);
    }
    acc *= dt * g.cell_volume;
    return std::pow(acc, 1.0 / beta);
}

}  // namespace fbmsde
