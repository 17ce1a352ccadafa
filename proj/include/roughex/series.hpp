#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "bounds.hpp"
#include "csv.hpp"
#include "explosion.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace roughex {

// v_n = Gamma(a n + 1) / Gamma(a n - a + 1).
inline double gamma_ratio_v(double alpha, int n) {
    if (n < 1) throw InputError("gamma_ratio_v needs n >= 1");
    const double x = alpha * n;
    return std::exp(numerics::log_gamma(x + 1.0) - numerics::log_gamma(x - alpha + 1.0));
}

// Coefficients a_n of f(t) = sum a_n t^{a n}, stored as a_n s^n.
struct SeriesState {
    std::vector<double> coeffs;  // coeffs[n-1] = a_n s^n
    double scale = 1.0;
    int n_max = 0;
    double u = 0.0;
    double alpha = 1.0;

    double scaled(int n) const { return coeffs.at(static_cast<std::size_t>(n - 1)); }

    int sign(int n) const {
        const double c = scaled(n);
        return (c > 0.0) - (c < 0.0);
    }

    double log_abs(int n) const { return std::log(std::abs(scaled(n))) - n * std::log(scale); }

    double coefficient(int n) const {
        const int s = sign(n);
        return s == 0 ? 0.0 : s * std::exp(log_abs(n));
    }
};

inline constexpr double kRescaleLow = 1e-100;
inline constexpr double kRescaleHigh = 1e100;

inline SeriesState compute_coefficients(const ModelParams& p, double u, int n_max,
                                        std::optional<double> initial_scale = std::nullopt) {
    if (n_max < 1) throw InputError("n_max must be at least 1");
    const auto r = riccati_coeffs(p, u);
    double s = 1.0;
    if (initial_scale) {
        s = *initial_scale;
    } else if (has_finite_explosion(classify(r))) {
        s = std::pow(lower_bound(p, u), p.alpha);
    }
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("rescaling base must be positive and finite");

    std::vector<double> v(static_cast<std::size_t>(n_max) + 1);
    for (int n = 1; n <= n_max; ++n) v[n] = gamma_ratio_v(p.alpha, n);

    std::vector<double> a(static_cast<std::size_t>(n_max) + 1, 0.0);  // a[n] = a_n s^n
    a[1] = s * r.d1 / v[1];
    for (int n = 1; n < n_max; ++n) {
        double conv = 0.0;
        for (int k = 1; k < n; ++k) conv += a[k] * a[n - k];
        a[n + 1] = s * (r.d2 * a[n] + conv) / v[n + 1];

        const double m = std::abs(a[n + 1]);
        if (m > kRescaleHigh || (m != 0.0 && m < kRescaleLow)) {
            const double log_r = -std::log(m) / (n + 1);
            for (int k = 1; k <= n + 1; ++k) {
                if (a[k] == 0.0) continue;
                const double sg = a[k] > 0.0 ? 1.0 : -1.0;
                a[k] = sg * std::exp(std::log(std::abs(a[k])) + k * log_r);
            }
            s *= std::exp(log_r);
        }
        if (!std::isfinite(a[n + 1]) || !(s > 0.0) || !std::isfinite(s))
            throw NumericalError("coefficient rescaling failed");
    }

    SeriesState st;
    st.coeffs.assign(a.begin() + 1, a.end());
    st.scale = s;
    st.n_max = n_max;
    st.u = u;
    st.alpha = p.alpha;
    return st;
}

namespace detail {

// log of alpha^alpha Gamma(2 alpha) / Gamma(alpha)^2.
inline double log_asymptotic_constant(double alpha) {
    return alpha * std::log(alpha) + numerics::log_gamma(2.0 * alpha) - 2.0 * numerics::log_gamma(alpha);
}

inline int last_positive_order(const SeriesState& st, int n) {
    while (n >= 1 && st.sign(n) <= 0) --n;
    return n;
}

inline int last_nonzero_order(const SeriesState& st, int n) {
    while (n >= 1 && st.sign(n) == 0) --n;
    return n;
}

} // namespace detail

// |a_n|^{-1/(a n)}.
inline double raw_estimate(const SeriesState& st, int n) {
    return std::exp(-st.log_abs(n) / (st.alpha * n));
}

// (a_n n^{1-a} Gamma(a)^2 / (a^a Gamma(2a)))^{-1/(a(n+1))}.
inline double refined_estimate(const SeriesState& st, int n) {
    const double a = st.alpha;
    const double lg = st.log_abs(n) + (1.0 - a) * std::log(static_cast<double>(n)) - detail::log_asymptotic_constant(a);
    return std::exp(-lg / (a * (n + 1)));
}

// Explosion time in case A. Uses the largest order <= n_max with a_n > 0
// (all a_n > 0 except where e0 = 0 makes even orders vanish).
inline ExplosionResult algorithm_1_explosion_time(const ModelParams& p, double u, int n_max = 100) {
    const MomentCase c = classify(p, u);
    if (c != MomentCase::A)
        throw CaseError("algorithm 1 needs case A, got case " + std::string(to_string(c)));
    const SeriesState st = compute_coefficients(p, u, n_max);
    const int n = detail::last_positive_order(st, n_max);
    const int h = detail::last_positive_order(st, std::max(1, n_max / 2));
    if (n < 1) throw NumericalError("no positive coefficient in case A");

    ExplosionResult res;
    res.method = Method::algorithm_1;
    res.moment_case = c;
    res.value = refined_estimate(st, n);
    res.diagnostics.last = res.value;
    res.diagnostics.last_order = n;
    res.diagnostics.previous = h >= 1 ? refined_estimate(st, h) : res.value;
    res.diagnostics.previous_order = h;
    res.diagnostics.relative_gap = relative_gap(res.diagnostics.previous, res.value);
    return res;
}

// Lower bound for the explosion time in case B. Falls back to the largest
// order with a_n != 0 when a_{n_max} vanishes.
inline ExplosionResult algorithm_2_lower_bound(const ModelParams& p, double u, int n_max = 200) {
    const MomentCase c = classify(p, u);
    if (c != MomentCase::B)
        throw CaseError("algorithm 2 needs case B, got case " + std::string(to_string(c)));
    const SeriesState st = compute_coefficients(p, u, n_max);
    const int n = detail::last_nonzero_order(st, n_max);
    const int h = detail::last_nonzero_order(st, std::max(1, n_max / 2));
    if (n < 1) throw NumericalError("all coefficients vanish");

    ExplosionResult res;
    res.method = Method::algorithm_2_lower_bound;
    res.moment_case = c;
    res.value = raw_estimate(st, n);
    res.diagnostics.last = res.value;
    res.diagnostics.last_order = n;
    res.diagnostics.previous = h >= 1 ? raw_estimate(st, h) : res.value;
    res.diagnostics.previous_order = h;
    res.diagnostics.relative_gap = relative_gap(res.diagnostics.previous, res.value);
    return res;
}

// Li_nu(z) = sum z^n / n^nu for 0 <= z < 1, summed until the geometric
// tail bound drops below 1e-17 of the partial sum.
inline double polylog(double nu, double z) {
    if (!(z >= 0.0) || !(z < 1.0)) throw DomainError("polylog needs 0 <= z < 1");
    if (z == 0.0) return 0.0;
    double sum = 0.0;
    double zn = 1.0;
    for (long n = 1;; ++n) {
        zn *= z;
        const double term = zn / std::pow(static_cast<double>(n), nu);
        sum += term;
        // terms k > n have ratio at most q to their predecessor
        const double dn = static_cast<double>(n);
        const double q = z * (nu < 0.0 ? std::pow((dn + 1.0) / dn, -nu) : 1.0);
        if (q < 1.0) {
            const double tail = term * q / (1.0 - q);
            if (tail <= 1e-17 * sum) break;
        }
        if (zn == 0.0) break;
    }
    return sum;
}

// Polylog blow-up profile plus N correction terms a_n - b_n.
inline double f_approx(const SeriesState& st, double t_star, double t, int N = 10) {
    if (!(t >= 0.0) || !(t < t_star)) throw DomainError("f_approx needs 0 <= t < T*");
    if (N < 0 || N > st.n_max) throw InputError("correction order exceeds available coefficients");
    if (t == 0.0) return 0.0;
    const double a = st.alpha;
    const double logC = detail::log_asymptotic_constant(a);
    const double logR = a * std::log(t_star);
    const double logz = a * std::log(t);
    const double lead = std::exp(logC - logR) * polylog(1.0 - a, std::exp(logz - logR));
    double corr = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double an = st.sign(n) == 0 ? 0.0 : st.sign(n) * std::exp(st.log_abs(n) + n * logz);
        const double bn = std::exp(logC - (n + 1) * logR + (a - 1.0) * std::log(static_cast<double>(n)) + n * logz);
        corr += an - bn;
    }
    return lead + corr;
}

inline double f_approx(const ModelParams& p, double u, double t, int N = 10) {
    const auto t_star = algorithm_1_explosion_time(p, u).value;
    return f_approx(compute_coefficients(p, u, std::max(N, 1)), t_star, t, N);
}

inline void write_csv(std::ostream& os, const SeriesState& st) {
    os << "n,log_abs_a,sign\n";
    for (int n = 1; n <= st.n_max; ++n)
        os << n << ',' << format_number(st.log_abs(n)) << ',' << st.sign(n) << '\n';
}

} // namespace roughex
