// sweep.hpp - one-parameter spectrum scans (eigenfrequencies vs g, vs delta, ...).

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmb/comb_design.hpp"
#include "qmb/dynamics.hpp"
#include "qmb/errors.hpp"
#include "qmb/model.hpp"
#include "qmb/spectrum.hpp"

namespace qmb {

enum class SweepParam { g, delta, f1, f2 };

inline SweepParam parse_sweep_param(std::string_view name) {
    if (name == "g") return SweepParam::g;
    if (name == "delta") return SweepParam::delta;
    if (name == "f1") return SweepParam::f1;
    if (name == "f2") return SweepParam::f2;
    throw InvalidParameter("unknown sweep parameter '" + std::string(name) + "' (expected g, delta, f1 or f2)");
}

inline std::string_view to_string(SweepParam p) {
    switch (p) {
        case SweepParam::g: return "g";
        case SweepParam::delta: return "delta";
        case SweepParam::f1: return "f1";
        case SweepParam::f2: return "f2";
    }
    return "?";
}

struct SweepOptions {
    SystemParams base;
    SweepParam vary = SweepParam::g;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 2;
    // When set, f1 and f2 follow the comb branch at the current g (and delta = f2
    // unless delta is the swept parameter).
    std::optional<Branch> constraint;
    // Additional sample values merged into the uniform grid.
    std::vector<double> extra_points;
    double degeneracy_tol = kDefaultDegeneracyTol;
};

struct SweepRow {
    double value = 0.0;
    std::array<double, kDim> frequencies{};
    std::optional<double> delta_error;  // empty: degenerate, delta undefined

    bool degenerate() const { return !delta_error.has_value(); }
};

inline SystemParams sweep_point(const SweepOptions& opt, double value) {
    SystemParams p = opt.base;
    switch (opt.vary) {
        case SweepParam::g: p.g = value; break;
        case SweepParam::delta: p.delta = value; break;
        case SweepParam::f1: p.f1 = value; break;
        case SweepParam::f2: p.f2 = value; break;
    }
    if (opt.constraint) {
        const auto sol = solve_comb_params(p.g, *opt.constraint);
        p.f1 = sol.f1;
        p.f2 = sol.f2;
        if (opt.vary != SweepParam::delta) {
            p.delta = sol.delta;
        }
    }
    return p;
}

inline std::vector<SweepRow> sweep_spectrum(const SweepOptions& opt) {
    if (opt.n < 2) {
        throw InvalidParameter("sweep_spectrum: need at least 2 grid points");
    }
    if (!(opt.lo < opt.hi)) {
        throw InvalidParameter("sweep_spectrum: require lo < hi");
    }
    auto grid = linspace(opt.lo, opt.hi, opt.n);
    grid.insert(grid.end(), opt.extra_points.begin(), opt.extra_points.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double v : grid) {
        const auto spectrum = eigenfrequencies(sweep_point(opt, v), opt.degeneracy_tol);
        rows.push_back({v, spectrum.frequencies, nonequidistance_error(spectrum)});
    }
    return rows;
}

}  // namespace qmb
