#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbmsde {

/// Uniform discretization of [0, T]: points t_i = i*T/n_steps.
class TimeGrid {
  public:
    TimeGrid(double horizon, std::size_t n_steps)
        : horizon_(horizon), n_steps_(n_steps) {
        if (!(horizon > 0.0)) throw std::domain_error("TimeGrid: horizon must be > 0");
        if (n_steps == 0) throw std::domain_error("TimeGrid: n_steps must be >= 1");
    }

    double horizon() const { return horizon_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t n_points() const { return n_steps_ + 1; }
    double dt() const { return horizon_ / double(n_steps_); }
    double t(std::size_t i) const { return horizon_ * double(i) / double(n_steps_); }

    bool operator==(const TimeGrid& o) const {
        return horizon_ == o.horizon_ && n_steps_ == o.n_steps_;
    }

  private:
    double horizon_;
    std::size_t n_steps_;
};

/// A real-valued function sampled at the grid points.
struct GridFunction {
    GridFunction(TimeGrid g, std::string lbl = "")
        : grid(g), values(g.n_points(), 0.0), label(std::move(lbl)) {}

    GridFunction(TimeGrid g, std::vector<double> v, std::string lbl = "")
        : grid(g), values(std::move(v)), label(std::move(lbl)) {
        validate();
    }

    void validate() const {
        if (values.size() != grid.n_points())
            throw std::invalid_argument("GridFunction: length does not match grid");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
    }

    /// Piecewise-linear evaluation at an arbitrary time in [0, T].
    double interp(double t) const {
        double u = t / grid.dt();
        if (u <= 0.0) return values.front();
        auto i = std::size_t(u);
        if (i >= grid.n_steps()) return values.back();
        double frac = u - double(i);
        return values[i] * (1.0 - frac) + values[i + 1] * frac;
    }

    TimeGrid grid;
    std::vector<double> values;
    std::string label;
};

}  // namespace fbmsde
