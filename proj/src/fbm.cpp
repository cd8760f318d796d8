#include "fbmsde/fbm.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "fbmsde/parallel.hpp"
#include "fbmsde/rng.hpp"

namespace fbmsde {

double covariance(const HurstParam& h, double t, double s) {
    if (t < 0.0 || s < 0.0) throw std::domain_error("covariance: times must be nonnegative");
    double hh = 2.0 * h.h();
    return 0.5 * (std::pow(t, hh) + std::pow(s, hh) - std::pow(std::abs(t - s), hh));
}

double c_h(const HurstParam& h) {
    double H = h.h();
    double beta = std::exp(std::lgamma(1.0 - 2.0 * H) + std::lgamma(H + 0.5) -
                           std::lgamma(1.5 - H));
    return std::sqrt(2.0 * H / ((1.0 - 2.0 * H) * beta));
}

VolterraKernel::VolterraKernel(const HurstParam& h)
    : h_(h.h()), c_(c_h(h)), jacobi_(quad::gauss_jacobi(24, 0.0, h.h() - 0.5)) {}

double VolterraKernel::inner_integral(double t, double s) const {
    // Integral over [s,t] of (u-s)^{H-1/2} u^{H-3/2} du.
    // Near-singular part on [s, min(2s, t)] with a Gauss-Jacobi rule, then
    // geometrically growing Gauss-Legendre panels (the remaining integrand is
    // smooth on each dyadic panel).
    const double p = h_ - 0.5;
    const double ge = h_ - 1.5;
    double acc = 0.0;
    double a = std::min(2.0 * s, t);
    {
        double half = 0.5 * (a - s);
        if (half > 0.0) {
            double sum = 0.0;
            for (std::size_t k = 0; k < jacobi_.nodes.size(); ++k) {
                double u = s + half * (1.0 + jacobi_.nodes[k]);
                sum += jacobi_.weights[k] * std::pow(u, ge);
            }
            acc += std::pow(half, p) * half * sum;
        }
    }
    auto smooth = [&](double u) { return std::pow(u - s, p) * std::pow(u, ge); };
    while (a < t) {
        double b = std::min(2.0 * a, t);
        acc += quad::integrate(smooth, a, b, 16);
        a = b;
    }
    return acc;
}

double VolterraKernel::K(double t, double s) const {
    if (!(s > 0.0) || !(s < t)) throw std::domain_error("kernel_K: requires 0 < s < t");
    return c_ * (std::pow(t / s, h_ - 0.5) * std::pow(t - s, h_ - 0.5) -
                 (h_ - 0.5) * std::pow(s, 0.5 - h_) * inner_integral(t, s));
}

double VolterraKernel::dK_dt(double t, double s) const {
    if (!(s > 0.0) || !(s < t)) throw std::domain_error("kernel_dK_dt: requires 0 < s < t");
    return c_ * (h_ - 0.5) * std::pow(t / s, h_ - 0.5) * std::pow(t - s, h_ - 1.5);
}

namespace {

const VolterraKernel& cached_kernel(const HurstParam& h) {
    static std::mutex mtx;
    static std::map<double, std::unique_ptr<VolterraKernel>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(h.h());
    if (it == cache.end())
        it = cache.emplace(h.h(), std::make_unique<VolterraKernel>(h)).first;
    return *it->second;
}

}  // namespace

double kernel_K(const HurstParam& h, double t, double s) { return cached_kernel(h).K(t, s); }
double kernel_dK_dt(const HurstParam& h, double t, double s) { return cached_kernel(h).dK_dt(t, s); }

VolterraWeights::VolterraWeights(const HurstParam& h, const TimeGrid& grid)
    : grid_(grid), kbar_(Eigen::MatrixXd::Zero(Eigen::Index(grid.n_steps()), Eigen::Index(grid.n_steps()))) {
    VolterraKernel ker(h);
    const std::size_t n = grid.n_steps();
    const double dt = grid.dt();
    const double H = h.h();
    const double c = ker.norm_const();
    const double sing = H - 0.5;  // K(t, s) ~ s^{H-1/2} as s -> 0
    // Rule for the (t-s)^{H-1/2} endpoint singularity of the diagonal cell.
    quad::Rule jac = quad::gauss_jacobi(12, H - 0.5, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        double tj = grid.t(j);
        for (std::size_t i = 0; i + 1 < j; ++i) {
            double v = (i == 0)
                           ? quad::integrate_singular_origin(
                                 [&](double s) { return ker.K(tj, s); }, sing, grid.t(1), 6, 12)
                           : quad::integrate([&](double s) { return ker.K(tj, s); }, grid.t(i),
                                             grid.t(i + 1), 6);
            kbar_(Eigen::Index(j - 1), Eigen::Index(i)) = v / dt;
        }
        // Diagonal cell [t_{j-1}, t_j]: split off the singular first term
        // c (t/s)^{H-1/2} (t-s)^{H-1/2} (Gauss-Jacobi), the remainder is
        // smooth.
        {
            double a = grid.t(j - 1);
            double half = 0.5 * (tj - a);
            double acc = 0.0;
            for (std::size_t k = 0; k < jac.nodes.size(); ++k) {
                double s = a + half * (1.0 + jac.nodes[k]);
                acc += jac.weights[k] * c * std::pow(tj / s, H - 0.5);
            }
            acc *= std::pow(half, H + 0.5);
            if (j == 1) {
                // The smooth remainder also carries the s -> 0 singularity.
                acc += quad::integrate_singular_origin(
                    [&](double s) {
                        return ker.K(tj, s) -
                               c * std::pow(tj / s, H - 0.5) * std::pow(tj - s, H - 0.5);
                    },
                    sing, tj, 6, 12);
            } else {
                acc += quad::integrate(
                    [&](double s) {
                        return ker.K(tj, s) -
                               c * std::pow(tj / s, H - 0.5) * std::pow(tj - s, H - 0.5);
                    },
                    a, tj, 8);
            }
            kbar_(Eigen::Index(j - 1), Eigen::Index(j - 1)) = acc / dt;
        }
    }
}

CholeskySampler::CholeskySampler(const HurstParam& h, const TimeGrid& grid) : grid_(grid) {
    const Eigen::Index n = Eigen::Index(grid.n_steps());
    Eigen::MatrixXd sigma(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            double v = covariance(h, grid.t(std::size_t(i + 1)), grid.t(std::size_t(j + 1)));
            sigma(i, j) = v;
            sigma(j, i) = v;
        }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("CholeskySampler: covariance matrix not numerically positive definite at n_steps=" +
                                 std::to_string(grid.n_steps()) + ", H=" + std::to_string(h.h()));
    chol_ = llt.matrixL();
}

FbmPath CholeskySampler::sample_one(int dim, std::uint64_t master_seed,
                                    std::uint64_t path_index) const {
    const std::size_t n = grid_.n_steps();
    FbmPath out{grid_, dim, {}, master_seed};
    out.bh.assign(std::size_t(dim), std::vector<double>(n + 1, 0.0));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(Eigen::Index(n));
    for (int d = 0; d < dim; ++d) {
        rng::NormalStream ns(rng::substream_seed(master_seed, path_index, std::uint64_t(d)));
        for (Eigen::Index i = 0; i < Eigen::Index(n); ++i) z(i) = ns.next();
        Eigen::VectorXd b = chol_ * z;
        for (std::size_t i = 0; i < n; ++i) out.bh[std::size_t(d)][i + 1] = b(Eigen::Index(i));
    }
    return out;
}

std::vector<FbmPath> CholeskySampler::sample(int dim, std::size_t n_paths, std::uint64_t seed,
                                             int n_threads) const {
    std::vector<FbmPath> out(n_paths, FbmPath{grid_, dim, {}, seed});
    parallel_for(n_paths, n_threads,
                 [&](std::size_t p) { out[p] = sample_one(dim, seed, p); });
    return out;
}

KernelSampler::KernelSampler(const HurstParam& h, const TimeGrid& grid)
    : grid_(grid), weights_(h, grid) {}

CoupledPath KernelSampler::sample_one(int dim, std::uint64_t master_seed,
                                      std::uint64_t path_index) const {
    const std::size_t n = grid_.n_steps();
    const double sqdt = std::sqrt(grid_.dt());
    CoupledPath out{grid_, dim, {}, {}, master_seed};
    out.w.assign(std::size_t(dim), std::vector<double>(n + 1, 0.0));
    out.bh.assign(std::size_t(dim), std::vector<double>(n + 1, 0.0));
    const Eigen::MatrixXd& kb = weights_.matrix();
    Eigen::VectorXd dw = Eigen::VectorXd::Zero(Eigen::Index(n));
    for (int d = 0; d < dim; ++d) {
        rng::NormalStream ns(rng::substream_seed(master_seed, path_index, std::uint64_t(d)));
        for (Eigen::Index i = 0; i < Eigen::Index(n); ++i) dw(i) = sqdt * ns.next();
        Eigen::VectorXd b = kb * dw;
        auto& w = out.w[std::size_t(d)];
        auto& bh = out.bh[std::size_t(d)];
        for (std::size_t i = 0; i < n; ++i) {
            w[i + 1] = w[i] + dw(Eigen::Index(i));
            bh[i + 1] = b(Eigen::Index(i));
        }
    }
    return out;
}

std::vector<CoupledPath> KernelSampler::sample(int dim, std::size_t n_paths, std::uint64_t seed,
                                               int n_threads) const {
    std::vector<CoupledPath> out(n_paths, CoupledPath{grid_, dim, {}, {}, seed});
    parallel_for(n_paths, n_threads,
                 [&](std::size_t p) { out[p] = sample_one(dim, seed, p); });
    return out;
}

Eigen::MatrixXd kernel_sampler_covariance(const VolterraWeights& w) {
    const Eigen::MatrixXd& kb = w.matrix();
    return w.grid().dt() * kb * kb.transpose();
}

std::vector<FbmPath> sample_cholesky(const HurstParam& h, const TimeGrid& grid, int dim,
                                     std::size_t n_paths, std::uint64_t seed, int n_threads) {
    if (n_paths == 0) throw std::invalid_argument("sample_cholesky: n_paths must be >= 1");
    return CholeskySampler(h, grid).sample(dim, n_paths, seed, n_threads);
}

std::vector<CoupledPath> sample_from_bm(const HurstParam& h, const TimeGrid& grid, int dim,
                                        std::size_t n_paths, std::uint64_t seed, int n_threads) {
    if (n_paths == 0) throw std::invalid_argument("sample_from_bm: n_paths must be >= 1");
    return KernelSampler(h, grid).sample(dim, n_paths, seed, n_threads);
}

}  // namespace fbmsde
