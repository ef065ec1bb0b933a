// polynomial.hpp - real cubic roots (trigonometric form) and the cubic discriminant.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace qmb::poly {

// Value of the monic cubic x^3 + a x^2 + b x + c.
inline double monic_cubic(double a, double b, double c, double x) noexcept {
    return ((x + a) * x + b) * x + c;
}

// Discriminant of x^3 + a x^2 + b x + c. Zero iff the cubic has a repeated root.
inline double cubic_discriminant(double a, double b, double c) noexcept {
    return 18.0 * a * b * c - 4.0 * a * a * a * c + a * a * b * b - 4.0 * b * b * b - 27.0 * c * c;
}

// Natural magnitude of the roots of x^3 + a x^2 + b x + c, used to make
// tolerances scale-free.
inline double cubic_root_scale(double a, double b, double c) noexcept {
    return std::max({std::abs(a), std::sqrt(std::abs(b)), std::cbrt(std::abs(c))});
}

namespace detail {

// Newton steps that are only accepted while they reduce |f|; safe near multiple roots.
inline double polish_root(double a, double b, double c, double x) noexcept {
    double fx = monic_cubic(a, b, c, x);
    for (int it = 0; it < 4 && fx != 0.0; ++it) {
        const double dfx = (3.0 * x + 2.0 * a) * x + b;
        if (dfx == 0.0) {
            break;
        }
        const double next = x - fx / dfx;
        const double fnext = monic_cubic(a, b, c, next);
        if (!(std::abs(fnext) < std::abs(fx))) {
            break;
        }
        x = next;
        fx = fnext;
    }
    return x;
}

}  // namespace detail

// Roots of x^3 + a x^2 + b x + c for the case of three real roots, ascending.
// The depressed cubic y^3 + P y + Q (x = y - a/3) is solved with
// y_k = 2 sqrt(-P/3) cos(theta/3 - 2 pi k / 3), cos(theta) = (3Q / 2P) sqrt(-3/P).
// A cubic with a complex pair is outside the contract; its real part is returned
// for the pair (the arccos argument is clamped).
inline std::array<double, 3> real_cubic_roots(double a, double b, double c) {
    const double scale = cubic_root_scale(a, b, c);
    if (scale == 0.0) {
        return {0.0, 0.0, 0.0};
    }
    const double shift = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    std::array<double, 3> roots{};
    if (p >= -1e-14 * scale * scale) {
        // triple (or numerically triple) root
        const double y = std::cbrt(-q);
        roots = {y - shift, y - shift, y - shift};
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp((3.0 * q / (2.0 * p)) * std::sqrt(-3.0 / p), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots[static_cast<std::size_t>(k)] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift;
        }
    }
    for (auto& r : roots) {
        r = detail::polish_root(a, b, c, r);
    }
    std::sort(roots.begin(), roots.end());

    // Vieta: x0 x1 x2 = -c. The root nearest zero is recovered from the other two,
    // which keeps it relatively accurate when c is tiny.
    auto by_mag = roots;
    std::sort(by_mag.begin(), by_mag.end(), [](double l, double r) { return std::abs(l) < std::abs(r); });
    const double big = by_mag[1] * by_mag[2];
    if (big != 0.0 && std::abs(by_mag[0]) < 0.25 * std::abs(by_mag[1])) {
        const double refined = -c / big;
        for (auto& r : roots) {
            if (r == by_mag[0]) {
                r = refined;
                break;
            }
        }
        std::sort(roots.begin(), roots.end());
    }
    return roots;
}

}  // namespace qmb::poly
