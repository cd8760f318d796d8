#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/grid.hpp"

namespace fbmsde {

using Point = std::vector<double>;

/// Bounded drift b(t, x) with a declared sup-norm bound, a continuity flag,
/// and an L^1-support radius (b(t,x) = 0 for |x| > support_radius). The
/// declared bound is enforced on every evaluation.
class DriftField {
  public:
    using Fn = std::function<Point(double, const Point&)>;

    DriftField() = default;
    DriftField(Fn eval, double sup_norm, bool continuous,
               double support_radius = std::numeric_limits<double>::infinity(),
               std::string name = "");

    /// Evaluates b(t, x); throws if |b(t,x)| exceeds the declared sup-norm.
    Point operator()(double t, const Point& x) const;

    double sup_norm() const { return sup_norm_; }
    bool continuous() const { return continuous_; }
    double support_radius() const { return support_radius_; }
    const std::string& name() const { return name_; }

  private:
    Fn eval_;
    double sup_norm_ = 0.0;
    bool continuous_ = true;
    double support_radius_ = std::numeric_limits<double>::infinity();
    std::string name_;
};

/// Euler trajectory of dX = b(t,X) dt + dB^H on the driver's grid.
struct SolutionPath {
    TimeGrid grid;
    int dim;
    Point x0;
    std::vector<Point> values;        // [n_points][dim], values[0] = x0
    const CoupledPath* driver = nullptr;
};

/// Explicit Euler with exact fBm increments:
/// X_{i+1} = X_i + b(t_i, X_i) dt + (B^H_{i+1} - B^H_i).
SolutionPath euler_solve(const DriftField& b, const Point& x0, const CoupledPath& driver);

/// Same scheme against a bare fBm array (Cholesky-sampled drivers carry no W
/// component); the returned path has no driver reference.
SolutionPath euler_solve(const DriftField& b, const Point& x0, const TimeGrid& grid,
                         const std::vector<std::vector<double>>& bh);

/// Mollified drift b^delta = phi_delta * b with the standard bump
/// phi(z) = C_d exp(-1/(1-|z|^2)) on the unit ball. The convolution is
/// evaluated by tensor-product Gauss quadrature; the result keeps the
/// original sup-norm bound, is continuous, and the support grows by delta.
DriftField mollify_drift(const DriftField& b, int dim, double delta, std::size_t quad_points = 24);

/// Normalization constant of the d-dimensional standard bump (cached per d).
double bump_normalization(int dim, std::size_t quad_points = 64);

/// Named drift fields satisfying the bounded L^1-cap assumptions:
/// zero, constant_capped, sine_capped, indicator_box, sign_capped.
/// `radius` is the support cap R; `scale` the amplitude.
DriftField drift_catalog(const std::string& name, double radius = 8.0, double scale = 1.0);

std::vector<std::string> drift_catalog_names();

}  // namespace fbmsde
