// model.hpp - parameters, state vector and generator of the three-resonator,
// three-atom single-excitation dynamics.
//
// Amplitude ordering is v = (s1, s2, s3, a1, a2, a3): atomic coherences first,
// then field modes, site index 1..3 along the resonator chain. The equations of
// motion in the frame rotating at the carrier omega0 are
//
//     d/dt v = -i M v
//
// with M real symmetric. Sites 1 and 4 (atom and field of resonator 1) carry
// +delta on the diagonal, sites 3 and 6 carry -delta, resonator 2 sits at zero.
// Writing [d/dt - i delta] for resonator 1 literally would put -delta there; the
// two conventions are the same system with resonators 1 and 3 relabeled, and
// spectra and the energy in the middle atom do not depend on the choice.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "qmb/errors.hpp"

namespace qmb {

inline constexpr int kDim = 6;

using Complex = std::complex<double>;
using RealMatrix6 = Eigen::Matrix<double, kDim, kDim>;
using ComplexMatrix6 = Eigen::Matrix<Complex, kDim, kDim>;
using ComplexVector6 = Eigen::Matrix<Complex, kDim, 1>;

// Named slots of the amplitude vector (zero-based).
enum class Mode : int { s1 = 0, s2 = 1, s3 = 2, a1 = 3, a2 = 4, a3 = 5 };

inline constexpr std::array<const char*, kDim> kModeNames{"s1", "s2", "s3", "a1", "a2", "a3"};

struct SystemParams {
    double g = 0.0;       // inter-resonator coupling
    double delta = 0.0;   // detuning of resonators 1 and 3 relative to resonator 2
    double f1 = 0.0;      // atom-field coupling in resonator 2
    double f2 = 0.0;      // atom-field coupling in resonators 1 and 3
    double omega0 = 0.0;  // carrier frequency; bookkeeping only, never enters the dynamics

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// Throws InvalidParameter unless every field is finite and f1, f2 >= 0.
// g is not sign-restricted here; schedules enforce g >= 0 separately.
inline void validate(const SystemParams& p) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.g) || !finite(p.delta) || !finite(p.f1) || !finite(p.f2) || !finite(p.omega0)) {
        throw InvalidParameter("SystemParams: all parameters must be finite");
    }
    if (p.f1 < 0.0 || p.f2 < 0.0) {
        throw InvalidParameter("SystemParams: atom-field couplings f1, f2 must be non-negative");
    }
}

class StateVector {
public:
    StateVector() : amplitudes_(ComplexVector6::Zero()) {}
    explicit StateVector(const ComplexVector6& amplitudes) : amplitudes_(amplitudes) {}

    const ComplexVector6& amplitudes() const noexcept { return amplitudes_; }

    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
    Complex operator[](Mode m) const { return amplitudes_(static_cast<int>(m)); }

    // Occupation probability |v_m|^2.
    double energy(Mode m) const { return std::norm(amplitudes_(static_cast<int>(m))); }

    double norm_squared() const { return amplitudes_.squaredNorm(); }

private:
    ComplexVector6 amplitudes_;
};

struct CouplingMatrix {
    RealMatrix6 entries = RealMatrix6::Zero();
};

inline CouplingMatrix build_coupling_matrix(const SystemParams& p) {
    validate(p);
    CouplingMatrix m;
    auto& e = m.entries;
    e(0, 0) = p.delta;
    e(2, 2) = -p.delta;
    e(3, 3) = p.delta;
    e(5, 5) = -p.delta;
    // atom-field pairs
    e(0, 3) = e(3, 0) = p.f2;
    e(1, 4) = e(4, 1) = p.f1;
    e(2, 5) = e(5, 2) = p.f2;
    // resonator chain 1-2-3
    e(3, 4) = e(4, 3) = p.g;
    e(4, 5) = e(5, 4) = p.g;
    return m;
}

// Unit vector with the excitation in slot `excited_index` (1-based, 1..6).
inline StateVector initial_state(int excited_index) {
    if (excited_index < 1 || excited_index > kDim) {
        throw InvalidParameter("initial_state: index must be in 1..6, got " + std::to_string(excited_index));
    }
    ComplexVector6 v = ComplexVector6::Zero();
    v(excited_index - 1) = 1.0;
    return StateVector(v);
}

inline StateVector initial_state(Mode m) { return initial_state(static_cast<int>(m) + 1); }

// S = D P with D = diag(-1,1,-1,1,-1,1) and P swapping sites 1<->3, 4<->6.
// S M S^-1 = -M for every parameter set, so the spectrum is symmetric about zero.
inline RealMatrix6 mirror_operator() {
    RealMatrix6 perm = RealMatrix6::Zero();
    constexpr std::array<int, kDim> target{2, 1, 0, 5, 4, 3};
    for (int i = 0; i < kDim; ++i) {
        perm(i, target[static_cast<std::size_t>(i)]) = 1.0;
    }
    Eigen::Matrix<double, kDim, 1> signs;
    signs << -1, 1, -1, 1, -1, 1;
    return signs.asDiagonal() * perm;
}

}  // namespace qmb
