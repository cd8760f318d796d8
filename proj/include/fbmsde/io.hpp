#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fbmsde/fbm.hpp"
#include "fbmsde/grid.hpp"
#include "fbmsde/sde.hpp"

namespace fbmsde::io {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    return f;
}

/// CSV of coupled paths: t, then per-dimension W, per-dimension B^H,
/// one block of columns per path.
inline void write_paths_csv(const std::string& path, const std::vector<CoupledPath>& paths) {
    auto f = open_out(path);
    f << "t";
    for (std::size_t p = 0; p < paths.size(); ++p) {
        for (int d = 0; d < paths[p].dim; ++d) f << ",w" << p << "_" << d;
        for (int d = 0; d < paths[p].dim; ++d) f << ",bh" << p << "_" << d;
    }
    f << "\n";
    const TimeGrid& g = paths.front().grid;
    for (std::size_t i = 0; i <= g.n_steps(); ++i) {
        f << fmt_num(g.t(i));
        for (const auto& cp : paths) {
            for (int d = 0; d < cp.dim; ++d) f << "," << fmt_num(cp.w[std::size_t(d)][i]);
            for (int d = 0; d < cp.dim; ++d) f << "," << fmt_num(cp.bh[std::size_t(d)][i]);
        }
        f << "\n";
    }
}

inline void write_paths_csv(const std::string& path, const std::vector<FbmPath>& paths) {
    auto f = open_out(path);
    f << "t";
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (int d = 0; d < paths[p].dim; ++d) f << ",bh" << p << "_" << d;
    f << "\n";
    const TimeGrid& g = paths.front().grid;
    for (std::size_t i = 0; i <= g.n_steps(); ++i) {
        f << fmt_num(g.t(i));
        for (const auto& cp : paths)
            for (int d = 0; d < cp.dim; ++d) f << "," << fmt_num(cp.bh[std::size_t(d)][i]);
        f << "\n";
    }
}

/// CSV of a solution path: t, per-dimension X, per-dimension B^H.
inline void write_solution_csv(const std::string& path, const SolutionPath& sol) {
    auto f = open_out(path);
    f << "t";
    for (int d = 0; d < sol.dim; ++d) f << ",x" << d;
    if (sol.driver)
        for (int d = 0; d < sol.dim; ++d) f << ",bh" << d;
    f << "\n";
    for (std::size_t i = 0; i <= sol.grid.n_steps(); ++i) {
        f << fmt_num(sol.grid.t(i));
        for (int d = 0; d < sol.dim; ++d) f << "," << fmt_num(sol.values[i][std::size_t(d)]);
        if (sol.driver)
            for (int d = 0; d < sol.dim; ++d) f << "," << fmt_num(sol.driver->bh[std::size_t(d)][i]);
        f << "\n";
    }
}

/// GridFunction round trip: CSV with columns t,value.
inline void write_grid_function_csv(const std::string& path, const GridFunction& g) {
    auto f = open_out(path);
    f << "t,value\n";
    for (std::size_t i = 0; i < g.values.size(); ++i)
        f << fmt_num(g.grid.t(i)) << "," << fmt_num(g.values[i]) << "\n";
}

/// JSON sampling manifest: Hurst parameter, grid, seed, sampler, version.
inline void write_manifest(const std::string& path, double h, const TimeGrid& grid, int dim,
                           std::size_t n_paths, std::uint64_t seed, const std::string& sampler) {
    nlohmann::json j;
    j["hurst"] = h;
    j["horizon_T"] = grid.horizon();
    j["n_steps"] = grid.n_steps();
    j["dim"] = dim;
    j["n_paths"] = n_paths;
    j["seed"] = seed;
    j["sampler"] = sampler;
    j["version"] = "fbmsde 0.1.0";
    auto f = open_out(path);
    f << j.dump(2) << "\n";
}

inline GridFunction read_grid_function_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::string line;
    std::getline(f, line);  // header
    std::vector<double> ts, vals;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("bad CSV line in '" + path + "'");
        ts.push_back(std::stod(line.substr(0, comma)));
        vals.push_back(std::stod(line.substr(comma + 1)));
    }
    if (ts.size() < 2) throw std::runtime_error("grid-function CSV needs at least 2 rows");
    return GridFunction(TimeGrid(ts.back(), ts.size() - 1), vals);
}

}  // namespace fbmsde::io
