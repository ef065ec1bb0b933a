// spectrum.hpp - characteristic polynomial, eigenfrequencies, the 1:3:5
// non-equidistance error, degeneracy diagnostics and the Laplace-domain
// response of the excited-atom amplitude s2.
//
// With p = -i omega the determinant of the Laplace-domain system is the even
// polynomial Det(p) = p^6 + c4 p^4 + c2 p^2 + c0, i.e. a cubic in q = p^2 = -omega^2.

#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "qmb/errors.hpp"
#include "qmb/model.hpp"
#include "qmb/polynomial.hpp"

namespace qmb {

inline constexpr double kDefaultDegeneracyTol = 1e-7;
inline constexpr double kSpectrumAgreementTol = 1e-9;

struct CharPoly {
    double c4 = 0.0;
    double c2 = 0.0;
    double c0 = 0.0;

    template <typename T>
    T operator()(T p) const {
        const T q = p * p;
        return ((q + c4) * q + c2) * q + c0;
    }
};

inline CharPoly char_poly(const SystemParams& params) {
    validate(params);
    const double g2 = params.g * params.g;
    const double d2 = params.delta * params.delta;
    const double f12 = params.f1 * params.f1;
    const double f22 = params.f2 * params.f2;
    const double dm = params.delta - params.f2;
    const double dp = params.delta + params.f2;
    CharPoly cp;
    cp.c4 = 2.0 * d2 + 2.0 * g2 + f12 + 2.0 * f22;
    cp.c2 = d2 * d2 + 2.0 * (g2 + f12 - f22) * d2 + 2.0 * (g2 + f12) * f22 + f22 * f22;
    // factored form keeps c0 exactly zero at delta = +-f2
    cp.c0 = f12 * dm * dm * dp * dp;
    return cp;
}

struct FrequencyCluster {
    double value = 0.0;
    int multiplicity = 0;
};

struct Spectrum {
    std::array<double, kDim> frequencies{};  // ascending
    double degeneracy_tol = kDefaultDegeneracyTol;
    std::vector<FrequencyCluster> clusters;

    bool degenerate() const {
        return std::any_of(clusters.begin(), clusters.end(),
                           [](const FrequencyCluster& c) { return c.multiplicity > 1; });
    }

    // omega_1 <= omega_2 <= omega_3, the upper half of the mirror-symmetric spectrum.
    std::array<double, 3> positive() const { return {frequencies[3], frequencies[4], frequencies[5]}; }
};

// Groups consecutive sorted frequencies closer than `tol`.
inline std::vector<FrequencyCluster> cluster_frequencies(std::span<const double> sorted, double tol) {
    std::vector<FrequencyCluster> out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        double sum = sorted[i];
        while (j < sorted.size() && sorted[j] - sorted[j - 1] <= tol) {
            sum += sorted[j];
            ++j;
        }
        out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
        i = j;
    }
    return out;
}

inline Spectrum make_spectrum(std::array<double, kDim> freqs, double degeneracy_tol = kDefaultDegeneracyTol) {
    std::sort(freqs.begin(), freqs.end());
    Spectrum s;
    s.frequencies = freqs;
    s.degeneracy_tol = degeneracy_tol;
    s.clusters = cluster_frequencies(s.frequencies, degeneracy_tol);
    return s;
}

// Eigenfrequencies from the closed-form cubic in q = -omega^2.
inline std::array<double, kDim> eigenfrequencies_closed_form(const CharPoly& cp) {
    const auto q = poly::real_cubic_roots(cp.c4, cp.c2, cp.c0);
    std::array<double, kDim> w{};
    for (std::size_t k = 0; k < 3; ++k) {
        const double omega = std::sqrt(std::max(0.0, -q[k]));
        w[2 * k] = -omega;
        w[2 * k + 1] = omega;
    }
    std::sort(w.begin(), w.end());
    return w;
}

// Eigenvalues of the real symmetric generator M.
inline std::array<double, kDim> eigenfrequencies_symmetric(const CouplingMatrix& m) {
    Eigen::SelfAdjointEigenSolver<RealMatrix6> solver(m.entries, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ConsistencyError("eigenfrequencies: symmetric eigensolver failed");
    }
    std::array<double, kDim> w{};
    for (int i = 0; i < kDim; ++i) {
        w[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    }
    std::sort(w.begin(), w.end());
    return w;
}

// Both routes are evaluated and must agree; the eigensolver result is returned.
inline Spectrum eigenfrequencies(const SystemParams& params, double degeneracy_tol = kDefaultDegeneracyTol) {
    const auto closed = eigenfrequencies_closed_form(char_poly(params));
    const auto numeric = eigenfrequencies_symmetric(build_coupling_matrix(params));
    double scale = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < kDim; ++i) {
        scale = std::max(scale, std::abs(numeric[i]));
        worst = std::max(worst, std::abs(closed[i] - numeric[i]));
    }
    if (worst > kSpectrumAgreementTol * scale) {
        std::ostringstream msg;
        msg << "eigenfrequencies: closed-form and eigensolver spectra disagree by " << worst;
        throw ConsistencyError(msg.str());
    }
    return make_spectrum(numeric, degeneracy_tol);
}

// |omega2/omega1 - 3| + |omega3/omega1 - 5|; empty when the spectrum is
// degenerate or omega1 is below the degeneracy tolerance.
inline std::optional<double> nonequidistance_error(const Spectrum& spectrum) {
    if (spectrum.degenerate()) {
        return std::nullopt;
    }
    const auto [w1, w2, w3] = spectrum.positive();
    if (!(w1 > spectrum.degeneracy_tol)) {
        return std::nullopt;
    }
    return std::abs(w2 / w1 - 3.0) + std::abs(w3 / w1 - 5.0);
}

struct DegeneracyReport {
    double discriminant = 0.0;  // of q^3 + c4 q^2 + c2 q + c0
    double normalized = 0.0;    // discriminant / scale^6
    bool repeated_q_root = false;
    bool zero_frequency_pair = false;  // c0 == 0, i.e. delta = +-f2 (or f1 = 0)
};

inline constexpr double kDiscriminantTol = 1e-12;

inline DegeneracyReport degeneracy_discriminant(const SystemParams& params, double tol = kDiscriminantTol) {
    const auto cp = char_poly(params);
    DegeneracyReport r;
    r.discriminant = poly::cubic_discriminant(cp.c4, cp.c2, cp.c0);
    const double scale = poly::cubic_root_scale(cp.c4, cp.c2, cp.c0);
    const double s6 = std::pow(scale, 6);
    r.normalized = s6 > 0.0 ? r.discriminant / s6 : 0.0;
    r.repeated_q_root = std::abs(r.normalized) <= tol;
    r.zero_frequency_pair = std::abs(cp.c0) <= tol * s6;
    return r;
}

// p (p^4 + 2(delta^2+g^2+f2^2) p^2 + n0): numerator of s2(p).
struct ResponseNumerator {
    double b2 = 0.0;
    double b0 = 0.0;

    template <typename T>
    T operator()(T p) const {
        const T q = p * p;
        return p * ((q + b2) * q + b0);
    }

    // Coefficients of p^0..p^5.
    std::array<double, 6> coefficients() const { return {0.0, b0, 0.0, b2, 0.0, 1.0}; }
};

inline ResponseNumerator response_numerator(const SystemParams& params) {
    validate(params);
    const double g2 = params.g * params.g;
    const double d2 = params.delta * params.delta;
    const double f22 = params.f2 * params.f2;
    ResponseNumerator n;
    n.b2 = 2.0 * (d2 + g2 + f22);
    n.b0 = d2 * d2 + 2.0 * d2 * g2 - 2.0 * d2 * f22 + 2.0 * g2 * f22 + f22 * f22;
    return n;
}

struct ResponseAmplitude {
    Complex value;
};

inline ResponseAmplitude s2_response(const SystemParams& params, Complex p) {
    const auto cp = char_poly(params);
    const auto num = response_numerator(params);
    const Complex det = cp(p);
    const double ap = std::abs(p);
    const double size = std::pow(ap, 6) + std::abs(cp.c4) * std::pow(ap, 4) + std::abs(cp.c2) * ap * ap + std::abs(cp.c0);
    if (det == Complex{0.0, 0.0} || std::abs(det) <= 1e-13 * size) {
        throw PoleError("s2_response: p is a root of the determinant");
    }
    return {num(p) / det};
}

namespace detail {

// Truncated power series in eps, coefficients [eps^0 .. eps^(n-1)].
using Series = std::vector<Complex>;

inline Series series_mul(const Series& x, const Series& y) {
    Series out(x.size(), Complex{});
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; i + j < out.size(); ++j) {
            out[i + j] += x[i] * y[j];
        }
    }
    return out;
}

// Taylor coefficients of the polynomial sum_k coeff[k] p^k around p0.
inline Series taylor_shift(std::span<const double> coeff, Complex p0, std::size_t order) {
    Series work(coeff.begin(), coeff.end());
    Series out(order, Complex{});
    // repeated synthetic division by (p - p0)
    for (std::size_t k = 0; k < order && !work.empty(); ++k) {
        Complex acc{};
        Series quotient(work.size() > 1 ? work.size() - 1 : 0, Complex{});
        for (std::size_t i = work.size(); i-- > 0;) {
            acc = acc * p0 + work[i];
            if (i > 0) {
                quotient[i - 1] = acc;
            }
        }
        out[k] = acc;
        work = std::move(quotient);
    }
    return out;
}

}  // namespace detail

// One pole of s2(p) with its confluent residue data.
struct LaplacePole {
    Complex p;           // -i omega
    int multiplicity;    // 1 for simple poles
    std::vector<Complex> series;  // Taylor coefficients of (p-p0)^m s2(p) around p0
};

inline std::vector<LaplacePole> s2_poles(const SystemParams& params, double degeneracy_tol = kDefaultDegeneracyTol) {
    const auto spectrum = eigenfrequencies(params, degeneracy_tol);
    const auto num = response_numerator(params);
    const auto ncoef = num.coefficients();
    const Complex minus_i{0.0, -1.0};

    std::vector<LaplacePole> poles;
    for (std::size_t c = 0; c < spectrum.clusters.size(); ++c) {
        const auto& cl = spectrum.clusters[c];
        const auto m = static_cast<std::size_t>(cl.multiplicity);
        const Complex p0 = minus_i * cl.value;

        auto series = detail::taylor_shift(ncoef, p0, m);
        // divide by the remaining factors (p0 - p_k + eps)
        for (std::size_t o = 0; o < spectrum.clusters.size(); ++o) {
            if (o == c) {
                continue;
            }
            const Complex d = p0 - minus_i * spectrum.clusters[o].value;
            detail::Series inv(m, Complex{});
            Complex term = 1.0 / d;
            for (std::size_t j = 0; j < m; ++j) {
                inv[j] = term;
                term *= -1.0 / d;
            }
            for (int rep = 0; rep < spectrum.clusters[o].multiplicity; ++rep) {
                series = detail::series_mul(series, inv);
            }
        }
        poles.push_back({p0, cl.multiplicity, std::move(series)});
    }
    return poles;
}

// s2(t) = sum of residues of s2(p) e^{pt}. Poles of multiplicity m use the
// confluent formula: coefficient of eps^(m-1) in (p-p0)^m s2(p) e^{pt} at p0+eps.
inline std::vector<Complex> inverse_laplace_s2(const SystemParams& params, std::span<const double> times,
                                               double degeneracy_tol = kDefaultDegeneracyTol) {
    const auto poles = s2_poles(params, degeneracy_tol);
    std::vector<Complex> out;
    out.reserve(times.size());
    for (double t : times) {
        Complex total{};
        for (const auto& pole : poles) {
            const auto m = static_cast<std::size_t>(pole.multiplicity);
            Complex acc{};
            double tk_over_fact = 1.0;  // t^k / k!
            for (std::size_t k = 0; k < m; ++k) {
                acc += pole.series[m - 1 - k] * tk_over_fact;
                tk_over_fact *= t / static_cast<double>(k + 1);
            }
            total += acc * std::exp(pole.p * t);
        }
        out.push_back(total);
    }
    return out;
}

inline Complex inverse_laplace_s2(const SystemParams& params, double t) {
    const double ts[] = {t};
    return inverse_laplace_s2(params, ts).front();
}

}  // namespace qmb
