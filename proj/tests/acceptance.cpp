// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and compares Monte Carlo or
// deterministic output against exact laws and closed forms.

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fbmsde/experiments.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/frac_ops.hpp"
#include "fbmsde/girsanov.hpp"
#include "fbmsde/parallel.hpp"
#include "fbmsde/sde.hpp"
#include "fbmsde/stats.hpp"

using namespace fbmsde;

namespace {

constexpr int kThreads = 4;
int g_failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s  [%s]\n", ok ? "PASS" : "FAIL", id, title.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

void run(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& f) {
    try {
        auto [ok, detail] = f();
        report(id, title, ok, detail);
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double sample_variance(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= double(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return v / double(xs.size() - 1);
}

GridFunction sample_fn(const TimeGrid& g, const std::function<double(double)>& f) {
    GridFunction out(g);
    for (std::size_t i = 0; i <= g.n_steps(); ++i) out.values[i] = f(g.t(i));
    return out;
}

// ---------------------------------------------------------------- criterion 1
std::pair<bool, std::string> exact_law_moments() {
    bool ok = true;
    std::string detail;
    const std::size_t n_paths = 10000, n = 256;
    for (double H : {0.1, 0.2, 0.4}) {
        HurstParam h(H);
        TimeGrid g(1.0, n);
        CholeskySampler s(h, g);
        std::vector<std::vector<double>> bh(n_paths);
        parallel_for(n_paths, kThreads,
                     [&](std::size_t p) { bh[p] = s.sample_one(1, 101, p).bh[0]; });

        std::vector<double> b1(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) b1[p] = bh[p][n];
        double var = sample_variance(b1);
        double se = 1.0 * std::sqrt(2.0 / double(n_paths - 1));
        bool var_ok = std::abs(var - 1.0) <= 3.0 * se;

        std::vector<double> logt, logv;
        for (std::size_t i : {16, 32, 64, 128, 256}) {
            std::vector<double> xs(n_paths);
            for (std::size_t p = 0; p < n_paths; ++p) xs[p] = bh[p][i];
            logt.push_back(std::log(g.t(i)));
            logv.push_back(std::log(sample_variance(xs)));
        }
        double slope = stats::ls_slope(logt, logv);
        bool slope_ok = std::abs(slope - 2.0 * H) <= 0.05;
        ok = ok && var_ok && slope_ok;
        detail += "H=" + fmt(H) + ": var(B_1)=" + fmt(var) + " slope=" + fmt(slope) + "; ";
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- criterion 2
std::pair<bool, std::string> kernel_consistency() {
    // Common-random-numbers control variate: both samplers consume the same
    // normal substreams, so max |Chat_kernel - Chat_cholesky| estimates the
    // discretization bias of the kernel representation against the exact law
    // with the Monte Carlo noise almost fully cancelled.
    const HurstParam h(0.2);
    const std::size_t n_paths = 10000;
    auto max_err = [&](std::size_t n) {
        TimeGrid g(1.0, n);
        CholeskySampler cs(h, g);
        KernelSampler ks(h, g);
        const Eigen::Index m = Eigen::Index(n);
        std::vector<Eigen::MatrixXd> acc(kThreads, Eigen::MatrixXd::Zero(m, m));
        parallel_for(n_paths, kThreads, [&](std::size_t p) {
            FbmPath a = cs.sample_one(1, 202, p);
            CoupledPath b = ks.sample_one(1, 202, p);
            Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
            for (std::size_t i = 0; i < n; ++i) {
                d(Eigen::Index(i)) = b.bh[0][i + 1] - a.bh[0][i + 1];
                sum(Eigen::Index(i)) = b.bh[0][i + 1] + a.bh[0][i + 1];
            }
            // x x^T - y y^T = ((x-y)(x+y)^T + (x+y)(x-y)^T) / 2
            acc[p % std::size_t(kThreads)] += 0.5 * (d * sum.transpose() + sum * d.transpose());
        });
        for (int t = 1; t < kThreads; ++t) acc[0] += acc[std::size_t(t)];
        acc[0] /= double(n_paths);
        return acc[0].cwiseAbs().maxCoeff();
    };
    double e128 = max_err(128), e256 = max_err(256), e512 = max_err(512);
    bool ok = e256 < e128 && e512 < 0.02;
    return {ok, "max cov err: n=128: " + fmt(e128) + ", n=256: " + fmt(e256) +
                    ", n=512: " + fmt(e512) + " (cap 0.02)"};
}

// ---------------------------------------------------------------- criterion 3
std::pair<bool, std::string> operator_suite() {
    std::string detail;
    // (a) fractional-integral power rule at 1024 steps.
    TimeGrid g1(1.0, 1024);
    GridFunction f = sample_fn(g1, [](double t) { return std::pow(t, 1.5); });
    GridFunction out = frac_integral(0.25, f);
    double c = std::tgamma(2.5) / std::tgamma(2.75);
    double e_pow = 0.0;
    for (std::size_t i = 16; i <= 1024; ++i) {
        double exact = c * std::pow(g1.t(i), 1.75);
        e_pow = std::max(e_pow, std::abs(out.values[i] - exact) / exact);
    }
    bool ok = e_pow < 1e-3;
    detail += "power-rule rel err=" + fmt(e_pow);

    // (b) derivative-inverts-integral with observed order >= 0.9.
    double prev = 0.0;
    std::size_t prev_n = 0;
    double worst_order = 1e9;
    for (std::size_t n : {128, 512, 2048}) {
        TimeGrid g(1.0, n);
        GridFunction s = sample_fn(g, [](double t) { return std::sin(t); });
        GridFunction back = frac_derivative(0.4, frac_integral(0.4, s));
        double e = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            e = std::max(e, std::abs(back.values[i] - s.values[i]));
        if (prev_n)
            worst_order = std::min(
                worst_order, std::log(prev / e) / std::log(double(n) / double(prev_n)));
        prev = e;
        prev_n = n;
    }
    ok = ok && worst_order >= 0.9;
    detail += ", inversion order=" + fmt(worst_order);

    // (c) forward-after-inverse identity on t^2.
    HurstParam h25(0.25);
    GridFunction fd = sample_fn(g1, [](double t) { return 2.0 * t; });
    GridFunction back2 = op_KH(op_KH_inverse_ac(fd, h25), h25);
    double e_id = 0.0;
    for (std::size_t i = 0; i <= 1024; ++i) {
        double exact = g1.t(i) * g1.t(i);
        e_id = std::max(e_id, std::abs(back2.values[i] - exact) / std::max(exact, 1e-2));
    }
    ok = ok && e_id < 1e-2;
    detail += ", K o K^{-1} err=" + fmt(e_id);

    // (d) adjoint-operator isometry on an indicator: squared L2 norm of
    // K_H*(1_{[0,r]}) equals r^{2H}.
    const double H = 0.25, r = 0.5;
    TimeGrid g2(1.0, 2048);
    GridFunction ind(g2);
    for (std::size_t i = 0; i <= 2048; ++i) ind.values[i] = g2.t(i) <= r ? 1.0 : 0.0;
    GridFunction ks = op_KH_star(ind, HurstParam(H));
    double dt = g2.dt();
    double l2 = ks.values[1] * ks.values[1] * dt / (2.0 * H);  // singular first cell
    for (std::size_t i = 1; i < 2048; ++i)
        l2 += 0.5 * (ks.values[i] * ks.values[i] + ks.values[i + 1] * ks.values[i + 1]) * dt;
    double e_iso = std::abs(l2 - std::pow(r, 2.0 * H)) / std::pow(r, 2.0 * H);
    ok = ok && e_iso < 1e-2;
    detail += ", isometry rel err=" + fmt(e_iso);
    return {ok, detail};
}

// ---------------------------------------------------------------- criterion 4
std::pair<bool, std::string> inverse_closed_form() {
    bool ok = true;
    std::string detail;
    DriftField one([](double, const Point& x) { return Point(x.size(), 1.0); }, 1.0, true);
    for (double H : {0.1, 0.25, 0.4}) {
        HurstParam h(H);
        TimeGrid g(1.0, 1024);
        KernelSampler ks(h, g);
        CoupledPath driver = ks.sample_one(1, 404, 0);
        SolutionPath sol = euler_solve(one, {0.0}, driver);
        auto v = compute_v(one, sol, h);
        double c = std::tgamma(1.5 - H) / std::tgamma(2.0 - 2.0 * H) / kh_scale(h);
        double worst = 0.0;
        for (std::size_t i = 1; i <= 1024; ++i) {
            double exact = c * std::pow(g.t(i), 0.5 - H);
            worst = std::max(worst, std::abs(v[0].values[i] - exact) / exact);
        }
        ok = ok && worst < 1e-2;
        detail += "H=" + fmt(H) + ": rel err=" + fmt(worst) + "; ";
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- criterion 5
std::pair<bool, std::string> girsanov_checks() {
    ExperimentConfig cfg;
    cfg.hurst = 0.2;
    cfg.n_steps = 512;
    cfg.n_paths = 10000;
    cfg.seed = 505;
    cfg.drift_name = "sine_capped";
    cfg.p_list = {3.0};
    cfg.threads = kThreads;
    Report r = run_girsanov_check(cfg);
    bool ok = r.metrics.at("pass_martingale_mean") == 1.0 &&
              r.metrics.at("pass_reweighted_var") == 1.0 &&
              r.metrics.at("pass_v_pointwise_bound") == 1.0 &&
              r.metrics.at("pass_v_l2_bound") == 1.0;
    return {ok, "E[Z^-1]=" + fmt(r.metrics.at("z_mean")) + " (se " +
                    fmt(r.metrics.at("z_stderr")) + "), max |v|/bound=" +
                    fmt(r.metrics.at("v_pointwise_max_ratio")) + ", reweighted var " +
                    (r.metrics.at("pass_reweighted_var") == 1.0 ? "within 5 se" : "OFF")};
}

// ---------------------------------------------------------------- criterion 6
std::pair<bool, std::string> moment_scaling() {
    ExperimentConfig cfg;
    cfg.hurst = 0.2;
    cfg.n_steps = 512;
    cfg.n_paths = 10000;
    cfg.seed = 606;
    cfg.p_list = {1.0, 2.0};
    cfg.allow_p_outside_hypothesis = true;
    cfg.threads = kThreads;

    cfg.drift_name = "zero";
    Report rz = run_moment_scaling(cfg);
    double s1 = rz.metrics.at("slope_p1"), s2 = rz.metrics.at("slope_p2");
    bool ok = std::abs(s1 - 0.4) <= 0.05 && std::abs(s2 - 0.8) <= 0.1;
    std::string detail =
        "zero drift: slope_p1=" + fmt(s1) + ", slope_p2=" + fmt(s2);

    cfg.drift_name = "sine_capped";
    Report rb = run_moment_scaling(cfg);
    // Small-lag slope from the two smallest lags per p.
    for (double p : {1.0, 2.0}) {
        std::vector<std::pair<double, double>> pts;  // (lag, estimate)
        for (const auto& row : rb.rows)
            if (row[0] == p) pts.push_back({row[1], row[2]});
        double slope = std::log(pts[1].second / pts[0].second) /
                       std::log(pts[1].first / pts[0].first);
        ok = ok && slope >= 2.0 * p * cfg.hurst - 0.1;
        detail += ", drift small-lag slope_p" + fmt(p) + "=" + fmt(slope);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- criterion 7
std::pair<bool, std::string> stability() {
    ExperimentConfig cfg;
    cfg.hurst = 0.2;
    cfg.n_steps = 512;
    cfg.n_paths = 1000;
    cfg.seed = 707;
    cfg.gaps = {1.0, 0.5, 0.25, 0.125, 0.0625};
    cfg.p_list = {3.0};
    cfg.threads = kThreads;

    bool ok = true;
    std::string detail;

    cfg.drift_name = "zero";
    Report rz = run_stability(cfg);
    for (const auto& row : rz.rows)
        ok = ok && std::abs(row[1] - row[0] * row[0]) <= 1e-9 * row[0] * row[0] &&
             row[2] <= 1e-9;
    detail += "zero drift exact; ";

    for (const std::string& name : {"sine_capped", "sign_capped"}) {
        cfg.drift_name = name;
        Report r = run_stability(cfg);
        double rho = r.metrics.at("spearman_estimate_vs_gap");
        ok = ok && rho >= 0.9;
        detail += name + ": spearman=" + fmt(rho);
        if (name == "sine_capped") {
            // Lipschitz drift: E[sup |diff|^2] within the Gronwall envelope.
            double worst = 0.0;
            for (const auto& row : r.rows)
                worst = std::max(worst, row[1] / (row[0] * row[0] * std::exp(2.0) * 1.5));
            ok = ok && worst <= 1.0;
            detail += " envelope ratio=" + fmt(worst);
        }
        detail += "; ";
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- criterion 8
std::pair<bool, std::string> krylov_scaling() {
    ExperimentConfig cfg;
    cfg.hurst = 0.2;
    cfg.n_steps = 512;
    cfg.n_paths = 2000;
    cfg.seed = 808;
    cfg.p_list = {3.0};
    cfg.krylov_radii = {1.0, 0.5, 0.25, 0.125};
    cfg.threads = kThreads;
    Report r = run_krylov_check(cfg);
    double tau = r.metrics.at("kendall_tau_ratio_vs_neglogr");
    // The ratio must not increase systematically as the ball shrinks.
    bool ok = tau <= 1.0 / 3.0 + 1e-12;
    std::string ratios;
    for (const auto& row : r.rows) ratios += fmt(row[4]) + " ";
    return {ok, "lhs/rhs ladder: " + ratios + "(kendall tau vs -log r: " + fmt(tau) + ")"};
}

// ---------------------------------------------------------------- criterion 9
std::pair<bool, std::string> reproducibility() {
    ExperimentConfig cfg;
    cfg.hurst = 0.2;
    cfg.n_steps = 128;
    cfg.n_paths = 200;
    cfg.seed = 909;
    cfg.p_list = {3.0};
    cfg.drift_name = "sine_capped";

    bool ok = true;
    std::string detail;
    using Runner = Report (*)(const ExperimentConfig&);
    const std::pair<const char*, Runner> runs[] = {{"stability", &run_stability},
                                                   {"moments", &run_moment_scaling},
                                                   {"girsanov", &run_girsanov_check},
                                                   {"krylov", &run_krylov_check}};
    for (const auto& [name, fn] : runs) {
        cfg.threads = 1;
        Report a = fn(cfg);
        cfg.threads = 4;
        Report b = fn(cfg);
        a.config = b.config = nlohmann::json::object();  // echo differs in thread count only
        bool same = report_to_csv(a) == report_to_csv(b);
        ok = ok && same;
        detail += std::string(name) + (same ? "=identical " : "=DIFFERS ");
    }
    return {ok, detail};
}

}  // namespace

int main() {
    run(1, "fBm exact-law moments and variance scaling", exact_law_moments);
    run(2, "kernel-representation covariance consistency", kernel_consistency);
    run(3, "fractional-operator suite", operator_suite);
    run(4, "inverse-operator closed form for constant drift", inverse_closed_form);
    run(5, "measure-change martingale and bounds", girsanov_checks);
    run(6, "moment scaling exponents", moment_scaling);
    run(7, "initial-condition stability", stability);
    run(8, "occupation-time scaling ratio", krylov_scaling);
    run(9, "thread-count reproducibility", reproducibility);
    if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
    else std::printf("all 9 criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
