#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>

#include "errors.hpp"

namespace roughex {

struct ModelParams {
    double alpha = 0.6;
    double rho = -0.8;
    double lambda = 2.0;
    double xi = 0.2;
    double vbar = 0.04;
    double v0 = 0.04;

    void validate() const {
        auto finite = [](double x) { return std::isfinite(x); };
        if (!finite(alpha) || !(alpha > 0.5 && alpha <= 1.0))
            throw InputError("alpha must lie in (1/2, 1]");
        if (!finite(rho) || !(rho > -1.0 && rho < 1.0))
            throw InputError("rho must lie in (-1, 1)");
        if (!finite(lambda) || !(lambda > 0.0)) throw InputError("lambda must be positive");
        if (!finite(xi) || !(xi > 0.0)) throw InputError("xi must be positive");
        if (!finite(vbar) || !(vbar > 0.0)) throw InputError("vbar must be positive");
        if (!finite(v0) || !(v0 > 0.0)) throw InputError("v0 must be positive");
    }

    ModelParams with_alpha(double a) const {
        ModelParams p = *this;
        p.alpha = a;
        return p;
    }
};

enum class MomentCase { A, B, C, D };

inline const char* to_string(MomentCase c) {
    switch (c) {
    case MomentCase::A: return "A";
    case MomentCase::B: return "B";
    case MomentCase::C: return "C";
    case MomentCase::D: return "D";
    }
    return "?";
}

inline bool has_finite_explosion(MomentCase c) {
    return c == MomentCase::A || c == MomentCase::B;
}

// Coefficients of R(u, w) = c1 + c2 w + c3 w^2 and derived quantities.
template <class T>
struct BasicRiccatiCoeffs {
    T c1, c2;
    double c3;
    T e0, e1, d1, d2;
};

using RiccatiCoeffs = BasicRiccatiCoeffs<double>;

template <class T>
BasicRiccatiCoeffs<T> riccati_coeffs(const ModelParams& p, T u) {
    BasicRiccatiCoeffs<T> r;
    r.c1 = u * (u - 1.0) / 2.0;
    r.c2 = p.rho * p.xi * u - p.lambda;
    r.c3 = p.xi * p.xi / 2.0;
    r.e0 = r.c2 / 2.0;
    r.e1 = r.e0 * r.e0 - r.c3 * r.c1;
    r.d1 = r.c1 * r.c3;
    r.d2 = r.c2;
    return r;
}

inline MomentCase classify(const RiccatiCoeffs& r) {
    if (!(r.c1 > 0.0)) return MomentCase::D;
    if (r.e0 >= 0.0) return MomentCase::A;
    return r.e1 < 0.0 ? MomentCase::B : MomentCase::C;
}

inline MomentCase classify(const ModelParams& p, double u) {
    return classify(riccati_coeffs(p, u));
}

inline std::optional<double> case_a_boundary(const ModelParams& p) {
    if (p.rho == 0.0) return std::nullopt;
    // lambda / (rho xi) evaluated as (lambda / xi) / rho: both steps are
    // exact for the usual decimal inputs more often than the product form.
    return (p.lambda / p.xi) / p.rho;
}

// G(u, w) = (w + e0)^2 - e1.
template <class T, class W>
auto G(const BasicRiccatiCoeffs<T>& r, W w) {
    auto s = w + r.e0;
    return s * s - r.e1;
}

template <class W>
auto G(const ModelParams& p, double u, W w) {
    return G(riccati_coeffs(p, u), w);
}

enum class Side { lower, upper };

inline const char* to_string(Side s) { return s == Side::lower ? "lower" : "upper"; }

// Edge of the finite-explosion region {A, B} on one side of [0, 1].
// The region is an interval (-inf, b) or (b, inf); b is located by bisection
// on the case predicate down to adjacent doubles.
inline double finite_region_boundary(const ModelParams& p, Side side) {
    const double sgn = side == Side::lower ? -1.0 : 1.0;
    double inner = side == Side::lower ? 0.0 : 1.0;
    double outer = inner + sgn;
    while (!has_finite_explosion(classify(p, outer))) {
        inner = outer;
        outer = inner + 2.0 * (outer - (side == Side::lower ? 0.0 : 1.0));
        if (!std::isfinite(outer)) throw NumericalError("finite-explosion region not found");
    }
    for (;;) {
        double mid = inner + (outer - inner) / 2.0;
        if (mid == inner || mid == outer) break;
        if (has_finite_explosion(classify(p, mid)))
            outer = mid;
        else
            inner = mid;
    }
    return outer;
}

} // namespace roughex
