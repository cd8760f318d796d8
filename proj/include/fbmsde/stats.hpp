#pragma once

#include <cstddef>
#include <vector>

namespace fbmsde::stats {

/// Sample mean, unbiased variance, and standard error of the mean.
struct Summary {
    double mean = 0.0;
    double variance = 0.0;
    double stderr_mean = 0.0;
    std::size_t n = 0;
};

Summary summarize(const std::vector<double>& xs);

/// Ratio estimator E[w z] / E[w] with a linearized standard error; used for
/// importance-weighted means.
struct WeightedSummary {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t n = 0;
};

WeightedSummary weighted_mean(const std::vector<double>& z, const std::vector<double>& w);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Kendall tau-a.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fbmsde::stats
