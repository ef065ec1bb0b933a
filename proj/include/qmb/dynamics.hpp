// dynamics.hpp - time evolution in the single-excitation sector.
//
// The spectral propagator U(t) = V exp(-i Lambda t) V^T uses the orthonormal
// eigenbasis of the real symmetric generator; RK4 is an independent oracle that
// never touches the eigendecomposition. Piecewise-constant schedules of the
// inter-resonator coupling g are evolved segment by segment with the state
// continuous across switch times (instantaneous quench).

#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "qmb/errors.hpp"
#include "qmb/model.hpp"

namespace qmb {

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;

    std::size_t size() const noexcept { return times.size(); }
};

class Propagator {
public:
    explicit Propagator(const SystemParams& params) {
        const auto m = build_coupling_matrix(params);
        Eigen::SelfAdjointEigenSolver<RealMatrix6> solver(m.entries);
        if (solver.info() != Eigen::Success) {
            throw ConsistencyError("Propagator: symmetric eigensolver failed");
        }
        values_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    ComplexMatrix6 matrix(double t) const {
        const ComplexMatrix6 v = vectors_.cast<Complex>();
        return v * phases(t).asDiagonal() * v.transpose();
    }

    StateVector apply(const StateVector& v0, double t) const {
        if (t == 0.0) {
            return v0;  // exact, no round trip through the eigenbasis
        }
        const ComplexVector6 coeff = vectors_.transpose().cast<Complex>() * v0.amplitudes();
        const ComplexVector6 rotated = phases(t).cwiseProduct(coeff);
        return StateVector(vectors_.cast<Complex>() * rotated);
    }

    const Eigen::Matrix<double, kDim, 1>& eigenvalues() const noexcept { return values_; }

private:
    ComplexVector6 phases(double t) const {
        ComplexVector6 ph;
        for (int i = 0; i < kDim; ++i) {
            ph(i) = std::polar(1.0, -values_(i) * t);
        }
        return ph;
    }

    Eigen::Matrix<double, kDim, 1> values_;
    RealMatrix6 vectors_;
};

namespace detail {

inline void check_times(std::span<const double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i])) {
            throw InvalidParameter("evolution times must be finite");
        }
        if (i > 0 && times[i] < times[i - 1]) {
            throw InvalidParameter("evolution times must be ascending");
        }
    }
}

inline void check_unit_norm(const StateVector& v0) {
    if (std::abs(v0.norm_squared() - 1.0) > 1e-10) {
        throw InvalidParameter("initial state must have unit norm");
    }
}

}  // namespace detail

inline Trajectory evolve_spectral(const SystemParams& params, const StateVector& v0, std::span<const double> times) {
    detail::check_times(times);
    detail::check_unit_norm(v0);
    const Propagator u(params);
    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());
    for (double t : times) {
        traj.states.push_back(u.apply(v0, t));
    }
    return traj;
}

inline constexpr double kDefaultRk4Step = 1e-2;
inline constexpr double kRk4NormTol = 1e-8;

// Classic fixed-step RK4 on d/dt v = -i M v. The step is shortened to
// t_end / ceil(t_end / dt) so the grid lands on t_end exactly. Every step is
// recorded, starting with t = 0.
inline Trajectory evolve_rk4(const SystemParams& params, const StateVector& v0, double dt, double t_end,
                             double norm_tol = kRk4NormTol) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidParameter("evolve_rk4: dt must be positive");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw InvalidParameter("evolve_rk4: t_end must be positive");
    }
    detail::check_unit_norm(v0);
    const ComplexMatrix6 a = Complex{0.0, -1.0} * build_coupling_matrix(params).entries.cast<Complex>();
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const double h = t_end / static_cast<double>(steps);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    ComplexVector6 v = v0.amplitudes();
    traj.times.push_back(0.0);
    traj.states.emplace_back(v);
    for (std::size_t n = 1; n <= steps; ++n) {
        const ComplexVector6 k1 = a * v;
        const ComplexVector6 k2 = a * (v + 0.5 * h * k1);
        const ComplexVector6 k3 = a * (v + 0.5 * h * k2);
        const ComplexVector6 k4 = a * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double drift = std::abs(v.squaredNorm() - 1.0);
        if (drift > norm_tol) {
            std::ostringstream msg;
            msg << "evolve_rk4: norm drift " << drift << " exceeds " << norm_tol << " at t = " << n * h
                << "; reduce dt";
            throw AccuracyError(msg.str());
        }
        traj.times.push_back(n == steps ? t_end : static_cast<double>(n) * h);
        traj.states.emplace_back(v);
    }
    return traj;
}

struct ScheduleSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double g = 0.0;
};

// Piecewise-constant g(t); delta, f1, f2 come from `base` and stay fixed.
struct Schedule {
    std::vector<ScheduleSegment> segments;
    SystemParams base;
};

inline constexpr double kScheduleJoinTol = 1e-12;

inline void validate(const Schedule& schedule) {
    validate(schedule.base);
    if (schedule.segments.empty()) {
        throw ScheduleError("schedule has no segments");
    }
    for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
        const auto& s = schedule.segments[i];
        if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) || !std::isfinite(s.g)) {
            throw ScheduleError("schedule segment with non-finite field");
        }
        if (!(s.t_end > s.t_start)) {
            throw ScheduleError("schedule segment must have t_end > t_start");
        }
        if (s.g < 0.0) {
            throw ScheduleError("schedule coupling g must be non-negative");
        }
        if (i > 0 && std::abs(s.t_start - schedule.segments[i - 1].t_end) > kScheduleJoinTol) {
            std::ostringstream msg;
            msg << "schedule gap or overlap between t = " << schedule.segments[i - 1].t_end << " and t = "
                << s.t_start;
            throw ScheduleError(msg.str());
        }
    }
    if (std::abs(schedule.segments.front().t_start) > kScheduleJoinTol) {
        throw ScheduleError("schedule must start at t = 0");
    }
}

inline Trajectory evolve_schedule(const Schedule& schedule, const StateVector& v0, std::span<const double> times) {
    validate(schedule);
    detail::check_times(times);
    detail::check_unit_norm(v0);
    if (!times.empty() && (times.front() < 0.0 || times.back() > schedule.segments.back().t_end + kScheduleJoinTol)) {
        throw ScheduleError("schedule does not cover the requested time window");
    }

    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());

    std::size_t next = 0;
    StateVector segment_start = v0;
    for (const auto& seg : schedule.segments) {
        SystemParams p = schedule.base;
        p.g = seg.g;
        const Propagator u(p);
        const bool last = &seg == &schedule.segments.back();
        while (next < times.size() && (times[next] < seg.t_end || last)) {
            traj.states.push_back(u.apply(segment_start, times[next] - seg.t_start));
            ++next;
        }
        segment_start = u.apply(segment_start, seg.t_end - seg.t_start);
    }
    return traj;
}

struct EnergyRow {
    double t = 0.0;
    std::array<double, kDim> e{};  // |s1|^2, |s2|^2, |s3|^2, |a1|^2, |a2|^2, |a3|^2

    double operator[](Mode m) const { return e[static_cast<std::size_t>(m)]; }
};

inline std::vector<EnergyRow> energies(const Trajectory& trajectory) {
    std::vector<EnergyRow> rows;
    rows.reserve(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        EnergyRow r;
        r.t = trajectory.times[i];
        for (std::size_t k = 0; k < kDim; ++k) {
            r.e[k] = std::norm(trajectory.states[i][k]);
        }
        rows.push_back(r);
    }
    return rows;
}

inline constexpr double kPlateauMaxSpacing = 1e-2;

// Width of the contiguous sample interval around `center` where E(x2) <= threshold.
// Zero when E(x2) at the sample nearest `center` already exceeds the threshold.
inline double plateau_width(const Trajectory& trajectory, double center, double threshold) {
    const auto& t = trajectory.times;
    if (t.empty() || center < t.front() || center > t.back()) {
        throw InvalidParameter("plateau_width: center outside the trajectory window");
    }
    const auto it = std::lower_bound(t.begin(), t.end(), center);
    auto idx = static_cast<std::size_t>(it - t.begin());
    if (idx == t.size() || (idx > 0 && center - t[idx - 1] < t[idx] - center)) {
        idx = idx == t.size() ? t.size() - 1 : idx - 1;
    }
    const auto lo_probe = idx > 0 ? idx - 1 : idx;
    const auto hi_probe = std::min(idx + 1, t.size() - 1);
    if (t.size() > 1 && t[hi_probe] - t[lo_probe] > 2.0 * kPlateauMaxSpacing + 1e-15) {
        throw InvalidParameter("plateau_width: trajectory too coarse near center (need >= 100 samples per unit time)");
    }

    auto below = [&](std::size_t i) { return trajectory.states[i].energy(Mode::s2) <= threshold; };
    if (!below(idx)) {
        return 0.0;
    }
    std::size_t lo = idx;
    std::size_t hi = idx;
    while (lo > 0 && below(lo - 1)) {
        --lo;
    }
    while (hi + 1 < t.size() && below(hi + 1)) {
        ++hi;
    }
    return t[hi] - t[lo];
}

// Evenly spaced grid of n points over [t0, t1], endpoints included.
inline std::vector<double> linspace(double t0, double t1, std::size_t n) {
    std::vector<double> out;
    if (n == 0) {
        return out;
    }
    if (n == 1) {
        out.push_back(t0);
        return out;
    }
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(i + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

}  // namespace qmb
