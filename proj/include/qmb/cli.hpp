// cli.hpp - command-line front end. `run` is the whole program; tools/qmb.cpp
// only forwards argv. Exit codes: 0 success, 1 I/O failure, 2 usage/validation.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmb/comb_design.hpp"
#include "qmb/dynamics.hpp"
#include "qmb/errors.hpp"
#include "qmb/io.hpp"
#include "qmb/model.hpp"
#include "qmb/protocols.hpp"
#include "qmb/spectrum.hpp"
#include "qmb/sweep.hpp"

namespace qmb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class Format { csv, json };

// Parameter selection shared by spectrum, sweep and evolve.
struct ParamOptions {
    std::optional<double> g, delta, f1, f2, omega0;
    std::string params_file;
    std::string comb;    // "A" / "B": derive delta, f1, f2 from g
    std::string preset;  // "qubit" / "qutrit"
};

struct Options {
    ParamOptions params;
    std::string format = "csv";
    std::string output;
    std::string config;

    // sweep
    std::string vary = "g";
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 101;
    std::string constraint;
    std::vector<double> extra;

    // comb / energy
    std::string branch = "A";
    double scale = 1.0;
    std::optional<double> target;

    // evolve
    std::string schedule;
    double t_end = 2.0 * kPi;
    std::size_t points = 2001;
    int excite = 2;
    std::string method = "spectral";
    double dt = kDefaultRk4Step;

    // figures
    std::string outdir = ".";
};

namespace detail {

inline bool verbose() {
    const char* v = std::getenv("QMB_VERBOSE");
    return v != nullptr && std::string(v) != "0" && std::string(v).size() > 0;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw InvalidParameter("unknown output format '" + s + "' (expected csv or json)");
}

// Output sink: a file when a path is given, else the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw IoError("cannot write '" + path + "'");
            }
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

    void finish() {
        stream_->flush();
        if (!*stream_) {
            throw IoError("write failed");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

inline SystemParams resolve_params(const ParamOptions& o) {
    SystemParams p;
    bool have_base = false;
    if (!o.params_file.empty()) {
        p = io::parse_params_kv(read_file(o.params_file));
        have_base = true;
    }
    std::optional<double> g = o.g;
    std::string comb = o.comb;
    if (!o.preset.empty()) {
        if (o.preset == "qubit") {
            g = g.value_or(kQubitCoupling);
        } else if (o.preset == "qutrit") {
            g = g.value_or(kQutritCoupling);
        } else {
            throw InvalidParameter("unknown preset '" + o.preset + "' (expected qubit or qutrit)");
        }
        if (comb.empty()) {
            comb = std::string(to_string(kEnergyBranch));
        }
    }
    if (!comb.empty()) {
        if (!g) {
            throw InvalidParameter("--comb needs --g");
        }
        const auto sol = solve_comb_params(*g, parse_branch(comb));
        p = sol.params();
        p.omega0 = o.omega0.value_or(0.0);
        return p;
    }
    if (!have_base && !(g && o.delta && o.f1 && o.f2)) {
        throw InvalidParameter("parameters required: --g --delta --f1 --f2, or --params FILE, or --comb/--preset");
    }
    if (g) p.g = *g;
    if (o.delta) p.delta = *o.delta;
    if (o.f1) p.f1 = *o.f1;
    if (o.f2) p.f2 = *o.f2;
    if (o.omega0) p.omega0 = *o.omega0;
    validate(p);
    return p;
}

inline void add_param_options(CLI::App* sub, ParamOptions& o) {
    sub->add_option("--g", o.g, "inter-resonator coupling");
    sub->add_option("--delta", o.delta, "detuning of resonators 1 and 3");
    sub->add_option("--f1", o.f1, "atom-field coupling in resonator 2");
    sub->add_option("--f2", o.f2, "atom-field coupling in resonators 1 and 3");
    sub->add_option("--omega0", o.omega0, "carrier frequency (bookkeeping only)");
    sub->add_option("--params", o.params_file, "key = value parameter file");
    sub->add_option("--comb", o.comb, "derive delta, f1, f2 from --g on comb branch A or B");
    sub->add_option("--preset", o.preset, "qubit or qutrit operating point (energy branch)");
}

inline void write_spectrum(std::ostream& out, Format fmt, const SystemParams& p) {
    const auto spectrum = eigenfrequencies(p);
    const auto delta = nonequidistance_error(spectrum);
    const auto disc = degeneracy_discriminant(p);
    if (fmt == Format::json) {
        nlohmann::json j{{"params", io::to_json(p)},
                         {"frequencies", spectrum.frequencies},
                         {"degenerate", !delta.has_value()},
                         {"discriminant", disc.discriminant},
                         {"repeated_q_root", disc.repeated_q_root},
                         {"zero_frequency_pair", disc.zero_frequency_pair}};
        j["delta"] = delta ? nlohmann::json(*delta) : nlohmann::json(nullptr);
        out << j.dump(2) << '\n';
        return;
    }
    out << "w1,w2,w3,w4,w5,w6,delta,degenerate,discriminant,zero_frequency_pair\n";
    for (double w : spectrum.frequencies) {
        out << io::fmt(w) << ',';
    }
    out << (delta ? io::fmt(*delta) : std::string{}) << ',' << (delta ? 0 : 1) << ',' << io::fmt(disc.discriminant)
        << ',' << (disc.zero_frequency_pair ? 1 : 0) << '\n';
}

inline void write_comb(std::ostream& out, Format fmt, const CombSolution& sol) {
    if (fmt == Format::json) {
        out << io::to_json(sol).dump(2) << '\n';
        return;
    }
    const auto spectrum = eigenfrequencies(sol.params());
    out << "branch,g,delta,f1,f2,spacing,r1,r2,r3,w1,w2,w3,w4,w5,w6\n";
    out << to_string(sol.branch) << ',' << io::fmt(sol.g) << ',' << io::fmt(sol.delta) << ',' << io::fmt(sol.f1)
        << ',' << io::fmt(sol.f2) << ',' << io::fmt(sol.spacing);
    for (double r : sol.residuals) out << ',' << io::fmt(r);
    for (double w : spectrum.frequencies) out << ',' << io::fmt(w);
    out << '\n';
}

inline void write_energy_rows(std::ostream& out, Format fmt, const std::vector<EnergyRow>& rows) {
    if (fmt == Format::csv) {
        io::write_energies_csv(out, rows);
        return;
    }
    nlohmann::json j = nlohmann::json::object();
    std::vector<double> t;
    std::array<std::vector<double>, kDim> cols;
    for (const auto& r : rows) {
        t.push_back(r.t);
        for (std::size_t k = 0; k < kDim; ++k) cols[k].push_back(r.e[k]);
    }
    j["t"] = t;
    for (std::size_t k = 0; k < kDim; ++k) j[std::string("E_") + kModeNames[k]] = cols[k];
    out << j.dump() << '\n';
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    f << text;
    if (!f) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

}  // namespace detail

struct FigureConfig {
    std::size_t g_points = 601;      // fig2 and fig3 over g in [0, 3]
    std::size_t delta_points = 2001;  // fig4 over delta in [0, 2]
    std::size_t t_points = 2001;      // fig5 over t in [0, 2 pi]
};

// Figure data: spectrum vs g (resonant base), delta vs g, spectrum vs delta at
// the qubit coupling with Branch A couplings, and E(x2)(t) at the two
// programmed couplings on the energy branch.
inline void write_figures(const std::filesystem::path& dir, const FigureConfig& cfg = {}) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    const SystemParams resonant{0.0, 0.0, 1.0, 1.0, 0.0};

    SweepOptions g_sweep;
    g_sweep.base = resonant;
    g_sweep.vary = SweepParam::g;
    g_sweep.lo = 0.0;
    g_sweep.hi = 3.0;
    g_sweep.n = cfg.g_points;
    const auto g_rows = sweep_spectrum(g_sweep);
    {
        std::ostringstream s;
        io::write_sweep_csv(s, g_rows);
        detail::write_text_file(dir / "fig2.csv", s.str());
    }
    {
        std::ostringstream s;
        s << "g,delta,degenerate\n";
        for (const auto& r : g_rows) {
            s << io::fmt(r.value) << ',' << (r.delta_error ? io::fmt(*r.delta_error) : std::string{}) << ','
              << (r.degenerate() ? 1 : 0) << '\n';
        }
        detail::write_text_file(dir / "fig3.csv", s.str());
    }
    {
        const auto anchor = solve_comb_params(kQubitCoupling, Branch::A);
        SweepOptions d_sweep;
        d_sweep.base = anchor.params();
        d_sweep.vary = SweepParam::delta;
        d_sweep.lo = 0.0;
        d_sweep.hi = 2.0;
        d_sweep.n = cfg.delta_points;
        d_sweep.extra_points = {anchor.delta};
        std::ostringstream s;
        io::write_sweep_csv(s, sweep_spectrum(d_sweep));
        detail::write_text_file(dir / "fig4.csv", s.str());
    }
    {
        const auto times = linspace(0.0, 2.0 * kPi, cfg.t_points);
        const auto v0 = initial_state(Mode::s2);
        const auto qubit = evolve_spectral(solve_comb_params(kQubitCoupling, kEnergyBranch).params(), v0, times);
        const auto qutrit = evolve_spectral(solve_comb_params(kQutritCoupling, kEnergyBranch).params(), v0, times);
        std::ostringstream s;
        s << "t,E2_qubit,E2_qutrit\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            s << io::fmt(times[i]) << ',' << io::fmt(qubit.states[i].energy(Mode::s2)) << ','
              << io::fmt(qutrit.states[i].energy(Mode::s2)) << '\n';
        }
        detail::write_text_file(dir / "fig5.csv", s.str());
    }
}

// Tokens `--key value` for every entry of a JSON config object (booleans and
// arrays expand to repeated flags); "command" selects the subcommand.
inline std::vector<std::string> config_tokens(const nlohmann::json& cfg, std::string& command) {
    if (!cfg.is_object()) {
        throw InvalidParameter("config file must hold a JSON object");
    }
    std::vector<std::string> tokens;
    auto scalar = [](const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) {
            std::ostringstream s;
            s.precision(17);
            s << v.get<double>();
            return s.str();
        }
        throw InvalidParameter("config values must be strings or numbers");
    };
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") {
            command = value.get<std::string>();
            continue;
        }
        const std::string flag = "--" + key;
        if (value.is_array()) {
            for (const auto& v : value) {
                tokens.push_back(flag);
                tokens.push_back(scalar(v));
            }
        } else {
            tokens.push_back(flag);
            tokens.push_back(scalar(value));
        }
    }
    return tokens;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    // A JSON config expands into flags placed before the explicit ones, so
    // command-line flags win (options keep the last value).
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            try {
                std::string command;
                const auto cfg = nlohmann::json::parse(detail::read_file(args[i + 1]));
                auto tokens = config_tokens(cfg, command);
                args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                std::size_t insert_at = 0;
                if (!args.empty() && args.front().rfind("-", 0) != 0) {
                    insert_at = 1;  // after an explicit subcommand
                } else if (!command.empty()) {
                    args.insert(args.begin(), command);
                    insert_at = 1;
                }
                args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), tokens.begin(), tokens.end());
            } catch (const IoError& e) {
                err << "qmb: " << e.what() << '\n';
                return kExitIo;
            } catch (const std::exception& e) {
                err << "qmb: invalid config: " << e.what() << '\n';
                return kExitUsage;
            }
            break;
        }
    }

    Options o;
    CLI::App app{"Three-resonator quantum motherboard: spectra, comb design and programmable dynamics", "qmb"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "csv or json")->capture_default_str();
        sub->add_option("--output,-o", o.output, "output file (default stdout)");
    };

    auto* spectrum = app.add_subcommand("spectrum", "eigenfrequencies, non-equidistance error and discriminant");
    detail::add_param_options(spectrum, o.params);
    add_output(spectrum);

    auto* sweep = app.add_subcommand("sweep", "spectrum along a one-parameter grid (CSV)");
    detail::add_param_options(sweep, o.params);
    add_output(sweep);
    sweep->add_option("--vary", o.vary, "g, delta, f1 or f2")->capture_default_str();
    sweep->add_option("--lo", o.lo)->capture_default_str();
    sweep->add_option("--hi", o.hi)->capture_default_str();
    sweep->add_option("--n", o.n, "grid points")->capture_default_str();
    sweep->add_option("--constraint", o.constraint, "comb branch A or B re-deriving f1, f2 from g");
    sweep->add_option("--extra", o.extra, "extra grid values")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    auto* comb = app.add_subcommand("comb", "solve the equidistant-comb parameters for a coupling g");
    add_output(comb);
    comb->add_option("--g", o.params.g, "coupling in (0, 1]")->required();
    comb->add_option("--branch", o.branch, "A or B")->capture_default_str();
    comb->add_option("--scale", o.scale, "comb spacing kappa")->capture_default_str();

    auto* energy = app.add_subcommand("energy", "closed-form E(x2) at t = pi, or the couplings that reach a target");
    add_output(energy);
    auto* target_opt = energy->add_option("--target", o.target, "desired E(x2) at t = pi");
    energy->add_option("--g", o.params.g, "evaluate E(x2)(pi) at this coupling")->excludes(target_opt);

    auto* evolve = app.add_subcommand("evolve", "time evolution; energies per subsystem");
    detail::add_param_options(evolve, o.params);
    add_output(evolve);
    evolve->add_option("--schedule", o.schedule, "JSON schedule of g(t)");
    evolve->add_option("--t-end", o.t_end, "end time (default 2 pi)");
    evolve->add_option("--points", o.points, "output time points")->capture_default_str();
    evolve->add_option("--excite", o.excite, "initially excited slot 1..6 (s1 s2 s3 a1 a2 a3)")->capture_default_str();
    evolve->add_option("--method", o.method, "spectral or rk4")->capture_default_str();
    evolve->add_option("--dt", o.dt, "RK4 step")->capture_default_str();

    auto* figures = app.add_subcommand("figures", "write fig2.csv .. fig5.csv");
    figures->add_option("--outdir", o.outdir, "output directory")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "qmb: " << e.what() << '\n';
        return kExitUsage;
    }

    const bool verbose = detail::verbose();
    try {
        if (*figures) {
            write_figures(o.outdir);
            if (verbose) err << "qmb: wrote fig2.csv..fig5.csv to " << o.outdir << '\n';
            return kExitOk;
        }
        const Format fmt = detail::parse_format(o.format);

        if (*spectrum) {
            const auto p = detail::resolve_params(o.params);
            detail::Sink sink(o.output, out);
            detail::write_spectrum(*sink, fmt, p);
            sink.finish();
        } else if (*sweep) {
            SweepOptions so;
            so.vary = parse_sweep_param(o.vary);
            if (!o.constraint.empty()) {
                // f1, f2 (and delta unless swept) are re-derived per point; only g is needed
                so.constraint = parse_branch(o.constraint);
                if (so.vary != SweepParam::g && !o.params.g) {
                    throw InvalidParameter("--constraint needs --g unless g is swept");
                }
                so.base.g = o.params.g.value_or(0.0);
                so.base.omega0 = o.params.omega0.value_or(0.0);
            } else {
                // the swept parameter need not be given
                auto po = o.params;
                auto& swept = so.vary == SweepParam::g       ? po.g
                              : so.vary == SweepParam::delta ? po.delta
                              : so.vary == SweepParam::f1    ? po.f1
                                                             : po.f2;
                if (!swept) swept = std::max(o.lo, 0.0);
                so.base = detail::resolve_params(po);
            }
            so.lo = o.lo;
            so.hi = o.hi;
            so.n = o.n;
            so.extra_points = o.extra;
            const auto rows = sweep_spectrum(so);
            detail::Sink sink(o.output, out);
            if (fmt == Format::csv) {
                io::write_sweep_csv(*sink, rows);
            } else {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& r : rows) {
                    nlohmann::json row{{"param", r.value}, {"frequencies", r.frequencies}, {"degenerate", r.degenerate()}};
                    row["delta"] = r.delta_error ? nlohmann::json(*r.delta_error) : nlohmann::json(nullptr);
                    j.push_back(row);
                }
                *sink << j.dump() << '\n';
            }
            sink.finish();
        } else if (*comb) {
            auto sol = solve_comb_params(*o.params.g, parse_branch(o.branch));
            if (o.scale != 1.0) {
                sol = scale_comb(sol, o.scale);
            }
            detail::Sink sink(o.output, out);
            detail::write_comb(*sink, fmt, sol);
            sink.finish();
        } else if (*energy) {
            detail::Sink sink(o.output, out);
            if (o.target) {
                const auto prog = solve_g_for_energy(*o.target);
                if (fmt == Format::json) {
                    *sink << io::to_json(prog).dump(2) << '\n';
                } else {
                    *sink << "target,g\n";
                    for (double g : prog.g_solutions) *sink << io::fmt(prog.target_e2) << ',' << io::fmt(g) << '\n';
                }
            } else if (o.params.g) {
                const double e = energy_at_pi(*o.params.g);
                if (fmt == Format::json) {
                    *sink << nlohmann::json{{"g", *o.params.g}, {"energy_at_pi", e}}.dump(2) << '\n';
                } else {
                    *sink << "g,energy_at_pi\n" << io::fmt(*o.params.g) << ',' << io::fmt(e) << '\n';
                }
            } else {
                throw InvalidParameter("energy needs --target or --g");
            }
            sink.finish();
        } else if (*evolve) {
            const auto v0 = initial_state(o.excite);
            Trajectory traj;
            if (!o.schedule.empty()) {
                std::optional<SystemParams> base;
                try {
                    base = detail::resolve_params(o.params);
                } catch (const InvalidParameter&) {
                    // schedule file may carry its own base
                }
                const auto sched = io::schedule_from_json(nlohmann::json::parse(detail::read_file(o.schedule)), base);
                const double t_end = evolve->count("--t-end") > 0 ? o.t_end : sched.segments.back().t_end;
                traj = evolve_schedule(sched, v0, linspace(0.0, t_end, o.points));
            } else if (o.method == "rk4") {
                traj = evolve_rk4(detail::resolve_params(o.params), v0, o.dt, o.t_end);
            } else if (o.method == "spectral") {
                traj = evolve_spectral(detail::resolve_params(o.params), v0, linspace(0.0, o.t_end, o.points));
            } else {
                throw InvalidParameter("unknown method '" + o.method + "' (expected spectral or rk4)");
            }
            detail::Sink sink(o.output, out);
            detail::write_energy_rows(*sink, fmt, energies(traj));
            sink.finish();
        }
    } catch (const IoError& e) {
        err << "qmb: " << e.what() << '\n';
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        err << "qmb: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "qmb: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "qmb: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "qmb: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(std::move(args), out, err);
}

}  // namespace qmb::cli
