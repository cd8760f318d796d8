#include "fbmsde/frac_ops.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/quadrature.hpp"

namespace fbmsde {

GridFunction frac_integral(double alpha, const GridFunction& f) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("frac_integral: alpha must be in (0, 1]");
    f.validate();
    const std::size_t n = f.grid.n_steps();
    const double dt = f.grid.dt();
    const double scale = std::pow(dt, alpha) / std::tgamma(alpha + 2.0);
    const double a1 = alpha + 1.0;

    // Product-trapezoidal weights: interior weights depend on the lag only.
    std::vector<double> d(n + 1, 0.0);
    for (std::size_t k = 1; k < n; ++k)
        d[k] = std::pow(double(k + 1), a1) - 2.0 * std::pow(double(k), a1) +
               std::pow(double(k - 1), a1);

    GridFunction out(f.grid, f.label.empty() ? "" : "I^a " + f.label);
    for (std::size_t m = 1; m <= n; ++m) {
        double w0 = std::pow(double(m - 1), a1) - std::pow(double(m), a1) +
                    a1 * std::pow(double(m), alpha);
        double acc = w0 * f.values[0] + f.values[m];
        for (std::size_t k = 1; k < m; ++k) acc += d[k] * f.values[m - k];
        out.values[m] = scale * acc;
    }
    return out;
}

GridFunction frac_derivative(double alpha, const GridFunction& f) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("frac_derivative: alpha must be in (0, 1)");
    if (f.grid.n_steps() < 2)
        throw std::domain_error("frac_derivative: needs at least 2 steps");
    GridFunction g = frac_integral(1.0 - alpha, f);
    const std::size_t n = f.grid.n_steps();
    const double dt = f.grid.dt();
    GridFunction out(f.grid);
    out.values[0] = (-3.0 * g.values[0] + 4.0 * g.values[1] - g.values[2]) / (2.0 * dt);
    for (std::size_t i = 1; i < n; ++i)
        out.values[i] = (g.values[i + 1] - g.values[i - 1]) / (2.0 * dt);
    out.values[n] = (3.0 * g.values[n] - 4.0 * g.values[n - 1] + g.values[n - 2]) / (2.0 * dt);
    return out;
}

GridFunction multiply_power(const GridFunction& f, double p) {
    GridFunction out(f.grid);
    out.values[0] = (p == 0.0) ? f.values[0] : 0.0;
    for (std::size_t i = 1; i < f.values.size(); ++i)
        out.values[i] = f.values[i] * std::pow(f.grid.t(i), p);
    return out;
}

double kh_scale(const HurstParam& h) {
    return VolterraKernel(h).norm_const() * std::tgamma(h.h() + 0.5);
}

GridFunction op_KH(const GridFunction& f, const HurstParam& h) {
    const double H = h.h();
    GridFunction g = multiply_power(f, H - 0.5);
    g = frac_integral(0.5 - H, g);
    g = multiply_power(g, 0.5 - H);
    g = frac_integral(2.0 * H, g);
    const double scale = kh_scale(h);
    for (double& v : g.values) v *= scale;
    return g;
}

GridFunction op_KH_inverse_ac(const GridFunction& f_derivative, const HurstParam& h) {
    // v(t) = t^{H-1/2} / (kh_scale * Gamma(1/2-H)) * Integral over [0,t] of
    //        (t-u)^{-1/2-H} u^{1/2-H} f'(u) du,  f' piecewise linear.
    // Both power factors are handled by Gauss-Jacobi rules on the cells that
    // carry them, so v is accurate down to the first grid node (where the
    // rule is exact for linear f').
    f_derivative.validate();
    const double H = h.h();
    const double alpha = 0.5 - H;  // order of the fractional integral
    const double pw = 0.5 - H;     // interior power of u
    const TimeGrid& grid = f_derivative.grid;
    const std::size_t n = grid.n_steps();
    const double dt = grid.dt();
    const double inv_gamma = 1.0 / (std::tgamma(alpha) * kh_scale(h));
    const quad::Rule jac_last = quad::gauss_jacobi(16, alpha - 1.0, 0.0);
    const quad::Rule jac_first = quad::gauss_jacobi(16, 0.0, pw);
    const quad::Rule jac_both = quad::gauss_jacobi(16, alpha - 1.0, pw);
    const quad::Rule& mid = quad::gauss_legendre(6);
    auto fp = [&](double u) { return f_derivative.interp(u); };

    // Interior-cell node data shared across all targets: for the cell
    // [t_i, t_{i+1}], the Gauss nodes and weights times u^{pw} f'(u).
    const std::size_t nm = mid.nodes.size();
    std::vector<double> cell_u(n * nm), cell_gw(n * nm);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < nm; ++j) {
            double u = grid.t(i) + 0.5 * dt * (1.0 + mid.nodes[j]);
            cell_u[i * nm + j] = u;
            cell_gw[i * nm + j] = 0.5 * dt * mid.weights[j] * std::pow(u, pw) * fp(u);
        }

    GridFunction out(grid, f_derivative.label.empty() ? "" : "KHinv " + f_derivative.label);
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = grid.t(k);
        double acc = 0.0;
        if (k == 1) {
            // Single cell with both endpoint powers absorbed: exact for
            // linear f'.
            double sum = 0.0;
            for (std::size_t j = 0; j < jac_both.nodes.size(); ++j)
                sum += jac_both.weights[j] * fp(0.5 * t * (1.0 + jac_both.nodes[j]));
            acc = std::pow(0.5 * t, alpha + pw) * sum;
        } else {
            const double t1 = grid.t(1);
            double sum = 0.0;
            for (std::size_t j = 0; j < jac_first.nodes.size(); ++j) {
                double u = 0.5 * t1 * (1.0 + jac_first.nodes[j]);
                sum += jac_first.weights[j] * std::pow(t - u, alpha - 1.0) * fp(u);
            }
            acc += std::pow(0.5 * t1, pw + 1.0) * sum;
            for (std::size_t i = 1; i + 1 < k; ++i)
                for (std::size_t j = 0; j < nm; ++j)
                    acc += cell_gw[i * nm + j] * std::pow(t - cell_u[i * nm + j], alpha - 1.0);
            sum = 0.0;
            const double a = grid.t(k - 1);
            for (std::size_t j = 0; j < jac_last.nodes.size(); ++j) {
                double u = a + 0.5 * dt * (1.0 + jac_last.nodes[j]);
                sum += jac_last.weights[j] * std::pow(u, pw) * fp(u);
            }
            acc += std::pow(0.5 * dt, alpha) * sum;
        }
        out.values[k] = std::pow(t, H - 0.5) * inv_gamma * acc;
    }
    return out;
}

GridFunction op_KH_inverse_general(const GridFunction& f, const HurstParam& h) {
    const double H = h.h();
    GridFunction g = frac_derivative(2.0 * H, f);
    g = multiply_power(g, H - 0.5);
    g = frac_derivative(0.5 - H, g);
    g = multiply_power(g, 0.5 - H);
    const double inv_scale = 1.0 / kh_scale(h);
    for (double& v : g.values) v *= inv_scale;
    return g;
}

GridFunction op_KH_star(const GridFunction& f, const HurstParam& h, double endpoint_b) {
    f.validate();
    const double T = f.grid.horizon();
    if (!(endpoint_b > 0.0) || endpoint_b > T * (1.0 + 1e-12))
        throw std::domain_error("op_KH_star: endpoint must lie in (0, horizon]");
    const double H = h.h();
    VolterraKernel ker(h);
    // Rule for the (t-s)^{H-1/2}-weighted first cell of the correction term.
    quad::Rule jac = quad::gauss_jacobi(16, 0.0, H - 0.5);
    const std::size_t n = f.grid.n_steps();
    const double dt = f.grid.dt();
    const double cfac = ker.norm_const() * (H - 0.5);

    GridFunction out(f.grid);
    for (std::size_t i = 1; i <= n; ++i) {
        const double s = f.grid.t(i);
        if (!(s < endpoint_b)) break;
        const double fs = f.values[i];
        double acc = ker.K(endpoint_b, s) * fs;

        // Correction integral, cell by cell. The first cell carries the
        // integrable (t-s)^{H-3/2} singularity tamed by f(t)-f(s) ~ O(t-s).
        double a = s;
        double b0 = std::min(s + dt, endpoint_b);
        {
            double half = 0.5 * (b0 - a);
            if (half > 0.0) {
                double sum = 0.0;
                for (std::size_t k = 0; k < jac.nodes.size(); ++k) {
                    double t = a + half * (1.0 + jac.nodes[k]);
                    double slope = (f.interp(t) - fs) / (t - s);
                    sum += jac.weights[k] * slope * std::pow(t / s, H - 0.5);
                }
                acc += cfac * std::pow(half, H - 0.5) * half * sum;
            }
        }
        for (double lo = b0; lo < endpoint_b - 1e-15 * T;) {
            double hi = std::min(lo + dt, endpoint_b);
            acc += quad::integrate(
                [&](double t) {
                    return (f.interp(t) - fs) * cfac * std::pow(t / s, H - 0.5) *
                           std::pow(t - s, H - 1.5);
                },
                lo, hi, 6);
            lo = hi;
        }
        out.values[i] = acc;
    }
    return out;
}

GridFunction op_KH_star(const GridFunction& f, const HurstParam& h) {
    return op_KH_star(f, h, f.grid.horizon());
}

}  // namespace fbmsde
