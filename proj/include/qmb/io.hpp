// io.hpp - text formats: flat key-value parameter files, CSV tables and JSON
// documents for comb solutions, energy programs and schedules.

#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qmb/comb_design.hpp"
#include "qmb/dynamics.hpp"
#include "qmb/errors.hpp"
#include "qmb/model.hpp"
#include "qmb/spectrum.hpp"
#include "qmb/sweep.hpp"

namespace qmb::io {

using nlohmann::json;

// 12 significant digits, shortest form.
inline std::string fmt(double x) {
    if (x == 0.0) {
        return "0";  // folds -0
    }
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12g", x);
    return buf.data();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view text, const std::string& key) {
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw InvalidParameter("invalid number for '" + key + "': '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace detail

// Lines of `key = value` (or `key: value`); '#' starts a comment. Keys g, delta,
// f1, f2 are required, omega0 defaults to 0.
inline SystemParams parse_params_kv(std::istream& in) {
    SystemParams p;
    std::array<bool, 4> seen{};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = detail::trim(view);
        if (view.empty()) {
            continue;
        }
        auto sep = view.find('=');
        if (sep == std::string_view::npos) {
            sep = view.find(':');
        }
        if (sep == std::string_view::npos) {
            throw InvalidParameter("parameter file line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key(detail::trim(view.substr(0, sep)));
        const double value = detail::parse_double(view.substr(sep + 1), key);
        if (key == "g") {
            p.g = value;
            seen[0] = true;
        } else if (key == "delta") {
            p.delta = value;
            seen[1] = true;
        } else if (key == "f1") {
            p.f1 = value;
            seen[2] = true;
        } else if (key == "f2") {
            p.f2 = value;
            seen[3] = true;
        } else if (key == "omega0") {
            p.omega0 = value;
        } else {
            throw InvalidParameter("parameter file line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    constexpr std::array<const char*, 4> names{"g", "delta", "f1", "f2"};
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            throw InvalidParameter(std::string("parameter file: missing key '") + names[i] + "'");
        }
    }
    validate(p);
    return p;
}

inline SystemParams parse_params_kv(const std::string& text) {
    std::istringstream in(text);
    return parse_params_kv(in);
}

// Written with 17 significant digits so a parse round trip is exact.
inline std::string format_params_kv(const SystemParams& p) {
    std::ostringstream out;
    out.precision(17);
    out << "g = " << p.g << "\n"
        << "delta = " << p.delta << "\n"
        << "f1 = " << p.f1 << "\n"
        << "f2 = " << p.f2 << "\n"
        << "omega0 = " << p.omega0 << "\n";
    return out.str();
}

inline json to_json(const SystemParams& p) {
    return json{{"g", p.g}, {"delta", p.delta}, {"f1", p.f1}, {"f2", p.f2}, {"omega0", p.omega0}};
}

inline SystemParams params_from_json(const json& j) {
    try {
        SystemParams p;
        p.g = j.at("g").get<double>();
        p.delta = j.at("delta").get<double>();
        p.f1 = j.at("f1").get<double>();
        p.f2 = j.at("f2").get<double>();
        p.omega0 = j.value("omega0", 0.0);
        validate(p);
        return p;
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("parameter object: ") + e.what());
    }
}

inline json to_json(const CombSolution& sol) {
    const auto spectrum = eigenfrequencies(sol.params());
    return json{{"branch", std::string(to_string(sol.branch))},
                {"g", sol.g},
                {"delta", sol.delta},
                {"f1", sol.f1},
                {"f2", sol.f2},
                {"spacing", sol.spacing},
                {"residuals", sol.residuals},
                {"spectrum", spectrum.frequencies}};
}

inline json to_json(const EnergyProgram& prog) {
    return json{{"target", prog.target_e2}, {"roots", prog.g_solutions}};
}

// Either {"base": {...}, "segments": [...]} or a bare segment array, in which
// case `fallback_base` supplies delta, f1, f2.
inline Schedule schedule_from_json(const json& j, const std::optional<SystemParams>& fallback_base = std::nullopt) {
    try {
        Schedule s;
        const json* segments = &j;
        if (j.is_object()) {
            segments = &j.at("segments");
            if (j.contains("base")) {
                s.base = params_from_json(j.at("base"));
            } else if (fallback_base) {
                s.base = *fallback_base;
            } else {
                throw ScheduleError("schedule: no base parameters given");
            }
        } else if (fallback_base) {
            s.base = *fallback_base;
        } else {
            throw ScheduleError("schedule: bare segment array needs base parameters");
        }
        if (!segments->is_array()) {
            throw ScheduleError("schedule: segments must be an array");
        }
        for (const auto& seg : *segments) {
            s.segments.push_back(
                {seg.at("t_start").get<double>(), seg.at("t_end").get<double>(), seg.at("g").get<double>()});
        }
        validate(s);
        return s;
    } catch (const json::exception& e) {
        throw ScheduleError(std::string("schedule: ") + e.what());
    }
}

inline json to_json(const Schedule& s) {
    json segs = json::array();
    for (const auto& seg : s.segments) {
        segs.push_back({{"t_start", seg.t_start}, {"t_end", seg.t_end}, {"g", seg.g}});
    }
    return json{{"base", to_json(s.base)}, {"segments", segs}};
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "param,w1,w2,w3,w4,w5,w6,delta,degenerate\n";
    for (const auto& r : rows) {
        out << fmt(r.value);
        for (double w : r.frequencies) {
            out << ',' << fmt(w);
        }
        out << ',' << (r.delta_error ? fmt(*r.delta_error) : std::string{}) << ',' << (r.degenerate() ? 1 : 0)
            << '\n';
    }
}

inline void write_energies_csv(std::ostream& out, const std::vector<EnergyRow>& rows) {
    out << "t,E_s1,E_s2,E_s3,E_a1,E_a2,E_a3\n";
    for (const auto& r : rows) {
        out << fmt(r.t);
        for (double e : r.e) {
            out << ',' << fmt(e);
        }
        out << '\n';
    }
}

}  // namespace qmb::io
