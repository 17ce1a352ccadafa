#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "errors.hpp"

namespace roughex::numerics {

inline double log_gamma(double x) { return std::lgamma(x); }

struct Quadrature {
    double value = 0.0;
    double error = 0.0;
};

// Integral over [a, inf) via w = a + L x / (1 - x), x in (0, 1), by
// tanh-sinh quadrature; the double-exponential rule tolerates the algebraic
// endpoint behaviour of the mapped integrand.
template <class F>
Quadrature integrate_to_infinity(F&& f, double a, double L, double rel_tol = 1e-13) {
    auto mapped = [&](double x) -> double {
        const double y = 1.0 - x;
        if (y <= 0.0 || x <= 0.0) return 0.0;
        const double v = f(a + L * x / y) * L / (y * y);
        return std::isfinite(v) ? v : 0.0;
    };
    static thread_local boost::math::quadrature::tanh_sinh<double> rule;
    Quadrature q;
    q.value = rule.integrate(mapped, 0.0, 1.0, rel_tol, &q.error);
    if (!std::isfinite(q.value)) throw NumericalError("quadrature produced a non-finite value");
    return q;
}

// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class F>
double find_root(F&& f, double lo, double hi, double abs_tol, std::uintmax_t max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw NumericalError("root not bracketed");
    auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
    std::uintmax_t iters = max_iter;
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return a + (b - a) / 2.0;
}

struct Extremum {
    double x;
    double value;
};

// Maximum of a unimodal f on [lo, hi].
template <class F>
Extremum maximize(F&& f, double lo, double hi, int bits = 40) {
    auto neg = [&](double x) { return -f(x); };
    auto [x, v] = boost::math::tools::brent_find_minima(neg, lo, hi, bits);
    return {x, -v};
}

} // namespace roughex::numerics
