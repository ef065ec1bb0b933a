// protocols.hpp - programmable transfer protocols built on the comb solutions:
// qubit/qutrit generation at t = pi, freezing by switching g off, and the
// storage cycle 1 -> 0 -> 1 over [0, 2 pi].

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "qmb/comb_design.hpp"
#include "qmb/dynamics.hpp"
#include "qmb/model.hpp"

namespace qmb {

inline constexpr double kPi = std::numbers::pi;

// |s2(pi)|^2 from the propagator for the comb at coupling g on `branch`.
inline double simulated_energy_at_pi(double g, Branch branch) {
    const auto sol = solve_comb_params(g, branch);
    return Propagator(sol.params()).apply(initial_state(Mode::s2), kPi).energy(Mode::s2);
}

struct BranchIdentification {
    Branch branch = Branch::A;
    std::array<double, 2> max_deviation{};  // indexed by Branch::A, Branch::B
};

// Runs both comb branches through the propagator on an n-point grid over (0, 1]
// and picks the one whose E(x2)(pi) follows energy_at_pi.
inline BranchIdentification identify_energy_branch(std::size_t n = 50) {
    BranchIdentification id;
    for (Branch b : {Branch::A, Branch::B}) {
        double worst = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            const double g = static_cast<double>(k) / static_cast<double>(n);
            worst = std::max(worst, std::abs(energy_at_pi(g) - simulated_energy_at_pi(g, b)));
        }
        id.max_deviation[b == Branch::A ? 0 : 1] = worst;
    }
    id.branch = id.max_deviation[0] <= id.max_deviation[1] ? Branch::A : Branch::B;
    return id;
}

// Comb dynamics up to t_freeze, then g switched to g_after (0 by default) until t_end.
inline Schedule freeze_schedule(const CombSolution& sol, double t_freeze, double t_end, double g_after = 0.0) {
    Schedule s;
    s.base = sol.params();
    s.segments.push_back({0.0, t_freeze, sol.g});
    if (t_end > t_freeze) {
        s.segments.push_back({t_freeze, t_end, g_after});
    }
    return s;
}

struct StorageReport {
    double e2_start = 0.0;
    double e2_half = 0.0;
    double e2_full = 0.0;
    double revival_error = 0.0;  // ||v(2 pi / spacing) - v(0)||
};

inline StorageReport storage_cycle(const CombSolution& sol) {
    const double period = 2.0 * kPi / sol.spacing;
    const auto v0 = initial_state(Mode::s2);
    const std::array<double, 3> times{0.0, 0.5 * period, period};
    const auto traj = evolve_spectral(sol.params(), v0, times);
    StorageReport r;
    r.e2_start = traj.states[0].energy(Mode::s2);
    r.e2_half = traj.states[1].energy(Mode::s2);
    r.e2_full = traj.states[2].energy(Mode::s2);
    r.revival_error = (traj.states[2].amplitudes() - v0.amplitudes()).norm();
    return r;
}

}  // namespace qmb
