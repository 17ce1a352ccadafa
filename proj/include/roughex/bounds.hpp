#pragma once

#include <cmath>

#include "model.hpp"
#include "numerics.hpp"

namespace roughex {

struct BoundSpec {
    MomentCase moment_case;
    double a_lower;     // 0 in case A, -e0 in case B
    double ghat_floor;  // -e1 in case B, unused (0) in case A
};

inline BoundSpec bound_spec(const ModelParams& p, double u) {
    const auto r = riccati_coeffs(p, u);
    const MomentCase c = classify(r);
    switch (c) {
    case MomentCase::A: return {c, 0.0, 0.0};
    case MomentCase::B: return {c, -r.e0, -r.e1};
    default: throw CaseError("explosion-time bounds need case A or B, got case " + std::string(to_string(c)));
    }
}

struct RFactor {
    double r_star;
    double value;
};

// sup over r > 1 of (r^a - 1)^{1/a} / (r (r - 1)), searched in x = log(r - 1).
inline RFactor r_factor(double alpha) {
    auto log_obj = [alpha](double x) {
        const double lr = std::log1p(std::exp(x));
        return std::log(std::expm1(alpha * lr)) / alpha - lr - x;
    };
    const auto best = numerics::maximize(log_obj, -30.0, std::log(999.0), 52);
    return {1.0 + std::exp(best.x), std::exp(best.value)};
}

struct BoundDetail {
    double value;
    double prefactor;      // Gamma(1+a)^{1/a}, times 4 for the upper bound
    double r_factor;       // 1 for the upper bound
    double integral;
    double integral_error;
};

namespace detail {

// Integral of (w / G(u,w))^{1/a} dw / w over [lo, inf).
inline numerics::Quadrature bound_integral(const ModelParams& p, double u, double lo, double rel_tol) {
    const auto r = riccati_coeffs(p, u);
    const double inv_a = 1.0 / p.alpha;
    auto f = [&](double w) {
        if (w <= 0.0) return 0.0;
        return std::exp(inv_a * (std::log(w) - std::log(G(r, w)))) / w;
    };
    // Scale of the region where G is near its value at the lower limit.
    const double L = std::sqrt(G(r, lo));
    return numerics::integrate_to_infinity(f, lo, L, rel_tol);
}

inline double gamma_prefactor(double alpha) {
    return std::exp(numerics::log_gamma(1.0 + alpha) / alpha);
}

} // namespace detail

inline BoundDetail lower_bound_detail(const ModelParams& p, double u, double rel_tol = 1e-13) {
    const BoundSpec spec = bound_spec(p, u);
    const auto q = detail::bound_integral(p, u, spec.a_lower, rel_tol);
    const double pre = detail::gamma_prefactor(p.alpha);
    const double rf = r_factor(p.alpha).value;
    return {pre * rf * q.value, pre, rf, q.value, q.error};
}

inline BoundDetail upper_bound_detail(const ModelParams& p, double u, double rel_tol = 1e-13) {
    const BoundSpec spec = bound_spec(p, u);
    auto q = detail::bound_integral(p, u, spec.a_lower, rel_tol);
    if (spec.moment_case == MomentCase::B) {
        // Constant floor -e1 on [0, -e0): closed form.
        q.value += p.alpha * std::pow(spec.a_lower, 1.0 / p.alpha) * std::pow(spec.ghat_floor, -1.0 / p.alpha);
    }
    const double pre = 4.0 * detail::gamma_prefactor(p.alpha);
    return {pre * q.value, pre, 1.0, q.value, q.error};
}

inline double lower_bound(const ModelParams& p, double u) { return lower_bound_detail(p, u).value; }
inline double upper_bound(const ModelParams& p, double u) { return upper_bound_detail(p, u).value; }

struct Sandwich {
    double lower;
    double upper;
};

inline Sandwich wellposed_sandwich(const ModelParams& p, double u) {
    Sandwich s{lower_bound(p, u), upper_bound(p, u)};
    if (!(s.lower > 0.0) || !(s.lower <= s.upper))
        throw NumericalError("inconsistent explosion-time bounds");
    return s;
}

} // namespace roughex
