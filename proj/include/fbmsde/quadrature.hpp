#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fbmsde::quad {

/// Nodes and weights of a quadrature rule on a reference interval.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(std::size_t n);

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, a,b > -1.
/// The weight is absorbed into the returned weights.
Rule gauss_jacobi(std::size_t n, double a, double b);

/// Integral of f over [lo, hi] with a Gauss-Legendre rule of n points.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::size_t n = 32);

/// Integral of (x - lo)^p * f(x) over [lo, hi], p > -1, f smooth.
/// The power factor is handled by a Gauss-Jacobi rule; f is evaluated only
/// at interior nodes.
double integrate_power_left(const std::function<double(double)>& f, double p,
                            double lo, double hi, std::size_t n = 24);

/// Integral over [0, hi] of f with an integrable power singularity ~ x^p
/// (p > -1) at the origin. Uses the substitution x = hi * u^(3/(1+p)) and
/// composite Gauss panels in u.
double integrate_singular_origin(const std::function<double(double)>& f,
                                 double p, double hi, std::size_t panels = 8,
                                 std::size_t n = 16);

}  // namespace fbmsde::quad
