#pragma once

#include <cmath>
#include <limits>

#include "model.hpp"
#include "numerics.hpp"

namespace roughex {

// Explosion time of the classical (alpha = 1) Heston model.
inline double t1_star(const ModelParams& p, double u) {
    const auto r = riccati_coeffs(p, u);
    const MomentCase c = classify(r);
    if (!has_finite_explosion(c)) return std::numeric_limits<double>::infinity();
    if (r.e1 < 0.0) {
        const double s = std::sqrt(-r.e1);
        return std::atan2(s, r.e0) / s;
    }
    // e1 >= 0 with e0 > 0: (1/(2 sqrt e1)) log((e0 + sqrt e1)/(e0 - sqrt e1)).
    const double s = std::sqrt(r.e1);
    const double q = s / r.e0;
    if (q < 1e-8) return (1.0 + q * q / 3.0) / r.e0;
    return std::atanh(q) / s;
}

struct ClassicalCriticalMoment {
    double u;
    Side side;
    double T;
    bool at_boundary = false;
};

inline ClassicalCriticalMoment classical_critical_moment(const ModelParams& p, double T, Side side) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InputError("maturity must be positive and finite");
    const double sgn = side == Side::lower ? -1.0 : 1.0;
    const double b = finite_region_boundary(p, side);
    if (t1_star(p, b) <= T) return {b, side, T, true};

    double dist = std::max(1.0, std::abs(b));
    double outer = b + sgn * dist;
    while (t1_star(p, outer) >= T) {
        dist *= 2.0;
        outer = b + sgn * dist;
        if (!std::isfinite(outer)) throw NumericalError("classical critical moment bracket expansion failed");
    }
    auto f = [&](double u) { return t1_star(p, u) - T; };
    const double lo = std::min(b, outer);
    const double hi = std::max(b, outer);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(outer);
    return {numerics::find_root(f, lo, hi, tol), side, T, false};
}

} // namespace roughex
