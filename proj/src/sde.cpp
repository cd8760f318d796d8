#include "fbmsde/sde.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fbmsde/quadrature.hpp"

namespace fbmsde {

namespace {

double norm2(const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double bump_unnormalized(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

}  // namespace

DriftField::DriftField(Fn eval, double sup_norm, bool continuous, double support_radius,
                       std::string name)
    : eval_(std::move(eval)),
      sup_norm_(sup_norm),
      continuous_(continuous),
      support_radius_(support_radius),
      name_(std::move(name)) {
    if (sup_norm < 0.0) throw std::invalid_argument("DriftField: sup_norm must be >= 0");
}

Point DriftField::operator()(double t, const Point& x) const {
    Point b = eval_ ? eval_(t, x) : Point(x.size(), 0.0);
    if (b.size() != x.size()) throw std::runtime_error("DriftField: dimension mismatch");
    if (norm2(b) > sup_norm_ * (1.0 + 1e-9) + 1e-300)
        throw std::runtime_error("DriftField '" + name_ + "': evaluation exceeds declared sup-norm");
    return b;
}

SolutionPath euler_solve(const DriftField& b, const Point& x0, const TimeGrid& grid,
                         const std::vector<std::vector<double>>& bh) {
    if (x0.size() != bh.size())
        throw std::invalid_argument("euler_solve: x0 dimension does not match driver");
    const std::size_t n = grid.n_steps();
    const double dt = grid.dt();
    SolutionPath out{grid, int(x0.size()), x0, {}, nullptr};
    out.values.assign(n + 1, Point(x0.size(), 0.0));
    out.values[0] = x0;
    for (std::size_t i = 0; i < n; ++i) {
        Point drift = b(grid.t(i), out.values[i]);
        for (std::size_t d = 0; d < x0.size(); ++d)
            out.values[i + 1][d] = out.values[i][d] + drift[d] * dt + (bh[d][i + 1] - bh[d][i]);
    }
    return out;
}

SolutionPath euler_solve(const DriftField& b, const Point& x0, const CoupledPath& driver) {
    if (int(x0.size()) != driver.dim)
        throw std::invalid_argument("euler_solve: x0 dimension does not match driver");
    SolutionPath out = euler_solve(b, x0, driver.grid, driver.bh);
    out.driver = &driver;
    return out;
}

double bump_normalization(int dim, std::size_t quad_points) {
    if (dim < 1) throw std::domain_error("bump_normalization: dim must be >= 1");
    static std::mutex mtx;
    static std::map<int, double> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(dim);
        if (it != cache.end()) return it->second;
    }
    const quad::Rule& r = quad::gauss_legendre(quad_points);
    // Tensor integral of exp(-1/(1-|z|^2)) over [-1,1]^dim.
    double total = 0.0;
    std::vector<std::size_t> idx(std::size_t(dim), 0);
    for (;;) {
        double w = 1.0, r2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            w *= r.weights[idx[std::size_t(d)]];
            double z = r.nodes[idx[std::size_t(d)]];
            r2 += z * z;
        }
        total += w * bump_unnormalized(r2);
        int d = 0;
        while (d < dim && ++idx[std::size_t(d)] == quad_points) {
            idx[std::size_t(d)] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    double c = 1.0 / total;
    std::lock_guard<std::mutex> lock(mtx);
    cache[dim] = c;
    return c;
}

DriftField mollify_drift(const DriftField& b, int dim, double delta, std::size_t quad_points) {
    if (!(delta > 0.0)) throw std::domain_error("mollify_drift: delta must be > 0");
    if (dim < 1) throw std::domain_error("mollify_drift: dim must be >= 1");

    // Tensor bump-weighted nodes on [-1,1]^dim; the weights are normalized to
    // sum to one so the convolution is an exact convex combination of drift
    // evaluations (sup-norm contraction holds by construction).
    const quad::Rule& r = quad::gauss_legendre(quad_points);
    std::vector<Point> nodes;
    std::vector<double> weights;
    std::vector<std::size_t> idx(std::size_t(dim), 0);
    double wsum = 0.0;
    for (;;) {
        double w = 1.0, r2 = 0.0;
        Point z(std::size_t(dim), 0.0);
        for (int d = 0; d < dim; ++d) {
            w *= r.weights[idx[std::size_t(d)]];
            z[std::size_t(d)] = r.nodes[idx[std::size_t(d)]];
            r2 += z[std::size_t(d)] * z[std::size_t(d)];
        }
        double phi = bump_unnormalized(r2);
        if (phi > 0.0) {
            nodes.push_back(std::move(z));
            weights.push_back(w * phi);
            wsum += w * phi;
        }
        int d = 0;
        while (d < dim && ++idx[std::size_t(d)] == quad_points) {
            idx[std::size_t(d)] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    for (double& w : weights) w /= wsum;

    DriftField inner = b;
    auto eval = [inner, nodes, weights, delta](double t, const Point& x) {
        Point acc(x.size(), 0.0);
        Point y(x.size());
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            for (std::size_t d = 0; d < x.size(); ++d) y[d] = x[d] - delta * nodes[k][d];
            Point bv = inner(t, y);
            for (std::size_t d = 0; d < x.size(); ++d) acc[d] += weights[k] * bv[d];
        }
        return acc;
    };
    double support = b.support_radius();
    if (std::isfinite(support)) support += delta;
    return DriftField(eval, b.sup_norm(), true, support,
                      b.name().empty() ? "mollified" : b.name() + "_mollified");
}

std::vector<std::string> drift_catalog_names() {
    return {"zero", "constant_capped", "sine_capped", "indicator_box", "sign_capped"};
}

DriftField drift_catalog(const std::string& name, double radius, double scale) {
    if (!(radius > 0.0)) throw std::domain_error("drift_catalog: radius must be > 0");
    // Componentwise profile, gated on |x| <= radius and scaled by 1/sqrt(d)
    // so the Euclidean norm never exceeds `scale` in any dimension.
    auto capped = [radius, scale](auto profile) {
        return [radius, scale, profile](double, const Point& x) {
            Point b(x.size(), 0.0);
            if (norm2(x) > radius) return b;
            double amp = scale / std::sqrt(double(x.size()));
            for (std::size_t d = 0; d < x.size(); ++d) b[d] = amp * profile(x[d]);
            return b;
        };
    };
    if (name == "zero")
        return DriftField([](double, const Point& x) { return Point(x.size(), 0.0); }, 0.0, true,
                          0.0, "zero");
    if (name == "constant_capped")
        return DriftField(capped([](double) { return 1.0; }), scale, false, radius,
                          "constant_capped");
    if (name == "sine_capped") {
        // Piecewise-linear cutoff: 1 inside radius/2, 0 outside radius.
        auto eval = [radius, scale](double, const Point& x) {
            Point b(x.size(), 0.0);
            double r = norm2(x);
            if (r > radius) return b;
            double cut = std::min(1.0, std::max(0.0, 2.0 * (1.0 - r / radius)));
            double amp = scale * cut / std::sqrt(double(x.size()));
            for (std::size_t d = 0; d < x.size(); ++d) b[d] = amp * std::sin(x[d]);
            return b;
        };
        return DriftField(eval, scale, true, radius, "sine_capped");
    }
    if (name == "indicator_box")
        return DriftField(capped([](double) { return 1.0; }), scale, false, radius,
                          "indicator_box");
    if (name == "sign_capped")
        return DriftField(capped([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }),
                          scale, false, radius, "sign_capped");
    std::string known;
    for (const auto& k : drift_catalog_names()) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("drift_catalog: unknown drift '" + name + "' (known: " + known + ")");
}

}  // namespace fbmsde
