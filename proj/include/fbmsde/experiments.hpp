#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbmsde/girsanov.hpp"
#include "fbmsde/hurst.hpp"
#include "fbmsde/sde.hpp"

namespace fbmsde {

/// A hard statistical or pathwise check failed during an experiment run
/// (distinct from invalid input and from numerical breakdown).
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration shared by all experiment subcommands. Parsed from JSON;
/// every report embeds the echo of the config that produced it.
struct ExperimentConfig {
    double hurst = 0.2;
    int dim = 1;
    double horizon_T = 1.0;
    std::size_t n_steps = 512;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 1;

    std::string drift_name = "sine_capped";
    double drift_radius = 8.0;
    double drift_scale = 1.0;

    std::vector<double> x0;  // defaults to the origin
    std::vector<double> gaps = {1.0, 0.5, 0.25, 0.125, 0.0625};
    std::vector<double> p_list = {3.0};
    std::vector<double> delta_list = {0.2, 0.1, 0.05};
    double beta = 1.5;
    std::vector<double> krylov_radii = {1.0, 0.5, 0.25, 0.125};

    int threads = 1;

    // The moment lemma assumes p > 1/(2H); the scaling checks themselves are
    // meaningful for any p >= 1/2, so the hypothesis is enforced unless
    // explicitly waived.
    bool allow_p_outside_hypothesis = false;
    bool allow_h_outside_uniqueness = true;

    HurstParam hurst_param() const { return HurstParam(hurst, dim); }
    TimeGrid grid() const { return TimeGrid(horizon_T, n_steps); }
    DriftField drift() const { return drift_catalog(drift_name, drift_radius, drift_scale); }
    Point initial_point() const;

    /// Throws std::invalid_argument on any violated hypothesis.
    void validate() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Tabular experiment output: named columns, numeric rows, scalar metrics,
/// and the config echo.
struct Report {
    std::string name;
    nlohmann::json config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> metrics;

    bool operator==(const Report& o) const = default;
};

std::string report_to_csv(const Report& r);
nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Writes the report to `path` in the given format ("csv" or "json").
/// Identical config+seed reproduces byte-identical numeric content.
void emit_report(const Report& r, const std::string& path, const std::string& format);

/// Initial-condition stability: for each gap g, X(x0) and X(x0 + g e1) are
/// solved against the same driver per path; rows (gap, estimate of
/// E[sup_t |difference|^2], stderr, n_paths) sorted by gap descending.
Report run_stability(const ExperimentConfig& cfg);

/// Moment scaling E|X_t - X_s|^{2p} over a dyadic lag ladder; reports the
/// fitted log-log slope per p and the implied constant C_p.
Report run_moment_scaling(const ExperimentConfig& cfg);

/// Girsanov checks: martingale normalization of Z_T^{-1}, reweighted
/// variance of X_t - x against t^{2H}, and the pointwise/L2 bounds on v.
Report run_girsanov_check(const ExperimentConfig& cfg);

/// Krylov occupation scaling over shrinking balls: rows
/// (r, lhs_estimate, lhs_stderr, rhs, ratio).
Report run_krylov_check(const ExperimentConfig& cfg);

}  // namespace fbmsde
