#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fbmsde/grid.hpp"
#include "fbmsde/hurst.hpp"
#include "fbmsde/quadrature.hpp"

namespace fbmsde {

/// fBm covariance R_H(t,s) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
double covariance(const HurstParam& h, double t, double s);

/// Normalization constant c_H = sqrt(2H / ((1-2H) Beta(1-2H, H+1/2))).
double c_h(const HurstParam& h);

/// Volterra kernel K_H(t,s) for 0 < s < t and its t-derivative.
/// The free functions cache the singular quadrature rule per H.
double kernel_K(const HurstParam& h, double t, double s);
double kernel_dK_dt(const HurstParam& h, double t, double s);

/// Evaluator holding the per-H quadrature rule for the kernel's inner
/// integral; use this form inside loops.
class VolterraKernel {
  public:
    explicit VolterraKernel(const HurstParam& h);

    double K(double t, double s) const;
    double dK_dt(double t, double s) const;
    double hurst() const { return h_; }
    double norm_const() const { return c_; }

  private:
    double inner_integral(double t, double s) const;

    double h_;
    double c_;
    quad::Rule jacobi_;  // weight (1+x)^{H-1/2} on [-1,1]
};

/// Lower-triangular cell-averaged kernel weights on a uniform grid:
/// kbar(j-1, i) = (1/dt) * Integral over [t_i, t_{i+1}] of K_H(t_j, s) ds
/// for 0 <= i < j <= n_steps. Built once, shared across paths.
class VolterraWeights {
  public:
    VolterraWeights(const HurstParam& h, const TimeGrid& grid);

    const TimeGrid& grid() const { return grid_; }
    /// Weight of increment dW_i in B^H at t_j (1-based j).
    double weight(std::size_t j, std::size_t i) const { return kbar_(Eigen::Index(j - 1), Eigen::Index(i)); }
    const Eigen::MatrixXd& matrix() const { return kbar_; }

  private:
    TimeGrid grid_;
    Eigen::MatrixXd kbar_;
};

/// fBm path sampled from the exact finite-dimensional law (no driving W).
struct FbmPath {
    TimeGrid grid;
    int dim;
    std::vector<std::vector<double>> bh;  // [dim][n_points], bh[*][0] = 0
    std::uint64_t seed;
};

/// Driving Brownian path W and the induced fBm B^H on a shared grid.
struct CoupledPath {
    TimeGrid grid;
    int dim;
    std::vector<std::vector<double>> w;   // [dim][n_points], w[*][0] = 0
    std::vector<std::vector<double>> bh;  // [dim][n_points], bh[*][0] = 0
    std::uint64_t seed;
};

/// Cholesky factor of the exact covariance on the interior grid points,
/// reusable across paths and dimensions. Throws if the covariance matrix is
/// not numerically positive definite; no jitter is ever added silently.
class CholeskySampler {
  public:
    CholeskySampler(const HurstParam& h, const TimeGrid& grid);

    FbmPath sample_one(int dim, std::uint64_t master_seed, std::uint64_t path_index) const;
    std::vector<FbmPath> sample(int dim, std::size_t n_paths, std::uint64_t seed,
                                int n_threads = 1) const;

    const Eigen::MatrixXd& factor() const { return chol_; }

  private:
    TimeGrid grid_;
    Eigen::MatrixXd chol_;
};

/// Kernel-representation sampler producing the coupled (W, B^H) pair.
/// Consumes the same normal substream layout as CholeskySampler, so both
/// samplers can be driven by common random numbers.
class KernelSampler {
  public:
    KernelSampler(const HurstParam& h, const TimeGrid& grid);

    CoupledPath sample_one(int dim, std::uint64_t master_seed, std::uint64_t path_index) const;
    std::vector<CoupledPath> sample(int dim, std::size_t n_paths, std::uint64_t seed,
                                    int n_threads = 1) const;

    const VolterraWeights& weights() const { return weights_; }

  private:
    TimeGrid grid_;
    VolterraWeights weights_;
};

/// Exact covariance of the kernel sampler's fBm component: dt * Kbar Kbar^T.
Eigen::MatrixXd kernel_sampler_covariance(const VolterraWeights& w);

std::vector<FbmPath> sample_cholesky(const HurstParam& h, const TimeGrid& grid, int dim,
                                     std::size_t n_paths, std::uint64_t seed,
                                     int n_threads = 1);
std::vector<CoupledPath> sample_from_bm(const HurstParam& h, const TimeGrid& grid, int dim,
                                        std::size_t n_paths, std::uint64_t seed,
                                        int n_threads = 1);

}  // namespace fbmsde
