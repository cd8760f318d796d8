#include "fbmsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fbmsde::stats {

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
    s.mean = sum / double(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.variance = ss / double(s.n - 1);
        s.stderr_mean = std::sqrt(s.variance / double(s.n));
    }
    return s;
}

WeightedSummary weighted_mean(const std::vector<double>& z, const std::vector<double>& w) {
    if (z.size() != w.size()) throw std::invalid_argument("weighted_mean: size mismatch");
    WeightedSummary s;
    s.n = z.size();
    if (s.n == 0) return s;
    double sw = std::accumulate(w.begin(), w.end(), 0.0);
    double swz = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) swz += w[i] * z[i];
    double wbar = sw / double(s.n);
    s.mean = swz / sw;
    if (s.n > 1) {
        // Linearization of the ratio estimator: residuals w_i (z_i - theta).
        double ss = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            double r = w[i] * (z[i] - s.mean);
            ss += r * r;
        }
        double var = ss / double(s.n - 1);
        s.stderr_mean = std::sqrt(var / double(s.n)) / wbar;
    }
    return s;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ls_slope: bad input");
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
    double my = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissa");
    return sxy / sxx;
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        double avg = 0.5 * (double(i) + double(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
    double my = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: bad input");
    return pearson(ranks(x), ranks(y));
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("kendall_tau: bad input");
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double s = (x[i] - x[j]) * (y[i] - y[j]);
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    double npairs = 0.5 * double(x.size()) * double(x.size() - 1);
    return double(concordant - discordant) / npairs;
}

}  // namespace fbmsde::stats
