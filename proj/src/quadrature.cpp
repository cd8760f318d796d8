#include "fbmsde/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fbmsde::quad {

namespace {

Rule compute_gauss_legendre(std::size_t n) {
    // Newton iteration on Legendre polynomials, symmetric nodes.
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.weights[i] = w;
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, Rule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

Rule gauss_jacobi(std::size_t n, double a, double b) {
    if (a <= -1.0 || b <= -1.0) throw std::domain_error("gauss_jacobi: exponents must be > -1");
    // Golub-Welsch on the Jacobi recurrence.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
    auto diag = [&](std::size_t k) -> double {
        double s = 2.0 * double(k) + a + b;
        if (k == 0) return (b - a) / (a + b + 2.0);
        return (b * b - a * a) / (s * (s + 2.0));
    };
    auto offdiag_sq = [&](std::size_t k) -> double {
        double s = 2.0 * double(k) + a + b;
        return 4.0 * double(k) * (double(k) + a) * (double(k) + b) * (double(k) + a + b) /
               (s * s * (s + 1.0) * (s - 1.0));
    };
    for (std::size_t k = 0; k < n; ++k) {
        J(Eigen::Index(k), Eigen::Index(k)) = diag(k);
        if (k > 0) {
            double e = std::sqrt(offdiag_sq(k));
            J(Eigen::Index(k), Eigen::Index(k - 1)) = e;
            J(Eigen::Index(k - 1), Eigen::Index(k)) = e;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                          std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.nodes[k] = es.eigenvalues()(Eigen::Index(k));
        double v0 = es.eigenvectors()(0, Eigen::Index(k));
        r.weights[k] = mu0 * v0 * v0;
    }
    return r;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::size_t n) {
    const Rule& r = gauss_legendre(n);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += r.weights[k] * f(mid + half * r.nodes[k]);
    return acc * half;
}

double integrate_power_left(const std::function<double(double)>& f, double p,
                            double lo, double hi, std::size_t n) {
    // x = lo + (hi-lo)(1+u)/2, (x-lo)^p = ((hi-lo)/2)^p (1+u)^p.
    Rule r = gauss_jacobi(n, 0.0, p);
    double half = 0.5 * (hi - lo);
    double scale = std::pow(half, p) * half;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        acc += r.weights[k] * f(lo + half * (1.0 + r.nodes[k]));
    return scale * acc;
}

double integrate_singular_origin(const std::function<double(double)>& f,
                                 double p, double hi, std::size_t panels,
                                 std::size_t n) {
    if (p <= -1.0) throw std::domain_error("integrate_singular_origin: p must be > -1");
    const double q = 3.0 / (1.0 + p);  // x = hi * u^q tames the singularity
    auto g = [&](double u) {
        double x = hi * std::pow(u, q);
        return f(x) * hi * q * std::pow(u, q - 1.0);
    };
    double acc = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        double lo = double(k) / double(panels);
        double up = double(k + 1) / double(panels);
        acc += integrate(g, lo, up, n);
    }
    return acc;
}

}  // namespace fbmsde::quad
