#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <ostream>
#include <type_traits>
#include <vector>

#include "bounds.hpp"
#include "csv.hpp"
#include "explosion.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace roughex {

enum class VieScheme {
    adams,      // product-trapezoidal predictor-corrector
    rectangle,  // explicit product-rectangle rule (cross-check)
};

struct VieOptions {
    VieScheme scheme = VieScheme::adams;
    double blowup_threshold = 1e8;
    int max_corrector_iterations = 20;
    double corrector_tolerance = 1e-12;
};

template <class Scalar>
struct VieSolution {
    std::vector<double> grid;
    std::vector<Scalar> values;
    bool blew_up = false;
    std::optional<double> blowup_time;
    Scalar u{};
    double step = 0.0;
};

namespace detail {

// (m+1)^b - m^b, m >= 0.
inline double first_difference(double m, double b) {
    if (m == 0.0) return 1.0;
    return std::pow(m, b) * std::expm1(b * std::log1p(1.0 / m));
}

// (m+2)^b + m^b - 2 (m+1)^b, m >= 0.
inline double second_difference(double m, double b) {
    if (m == 0.0) return std::pow(2.0, b) - 2.0;
    return std::pow(m, b) * (std::expm1(b * std::log1p(2.0 / m)) - 2.0 * std::expm1(b * std::log1p(1.0 / m)));
}

// Product-trapezoid weights for I^b on a uniform grid: the value at t_{n+1}
// is h^b / Gamma(b+2) [psi_{n+1} + w0(n) psi_0 + sum_{j=1}^{n} inner[n-j] psi_j].
struct TrapezoidWeights {
    double b;
    std::vector<double> inner;

    TrapezoidWeights(double b_, int steps) : b(b_), inner(static_cast<std::size_t>(steps) + 1) {
        for (int m = 0; m <= steps; ++m) inner[m] = second_difference(m, b + 1.0);
    }

    double w0(int n) const {
        const double dn = n;
        return std::pow(dn, b + 1.0) - (dn - b) * std::pow(dn + 1.0, b);
    }
};

// Blow-up time from the profile f ~ Gamma(2a)/Gamma(a) (T - t)^{-a}.
inline double profile_blowup_time(double alpha, double t, double f) {
    const double K = std::exp(numerics::log_gamma(2.0 * alpha) - numerics::log_gamma(alpha));
    return t + std::pow(f / K, -1.0 / alpha);
}

template <class Scalar>
double magnitude(const Scalar& x) {
    return std::abs(x);
}

} // namespace detail

template <class Scalar>
VieSolution<Scalar> solve_vie(const ModelParams& p, Scalar u, double t_end, int steps, const VieOptions& opt = {}) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InputError("t_end must be positive and finite");
    if (steps < 16) throw InputError("at least 16 steps are required");
    constexpr bool is_real = std::is_same_v<Scalar, double>;
    const double a = p.alpha;
    const double h = t_end / steps;
    const auto r = riccati_coeffs(p, u);
    auto g = [&](const Scalar& w) { return G(r, w); };

    const double ha = std::pow(h, a);
    const double cp = ha / std::exp(numerics::log_gamma(a + 1.0));
    const double cc = ha / std::exp(numerics::log_gamma(a + 2.0));
    std::vector<double> bw(static_cast<std::size_t>(steps) + 1);
    for (int m = 0; m <= steps; ++m) bw[m] = detail::first_difference(m, a);
    const detail::TrapezoidWeights tw(a, steps);

    VieSolution<Scalar> sol;
    sol.u = u;
    sol.step = h;
    sol.grid.reserve(static_cast<std::size_t>(steps) + 1);
    sol.values.reserve(static_cast<std::size_t>(steps) + 1);
    sol.grid.push_back(0.0);
    sol.values.push_back(Scalar(0.0));
    std::vector<Scalar> gv;
    gv.reserve(static_cast<std::size_t>(steps) + 1);
    gv.push_back(g(Scalar(0.0)));

    for (int n = 0; n < steps; ++n) {
        Scalar pred(0.0);
        for (int j = 0; j <= n; ++j) pred += bw[n - j] * gv[j];
        Scalar x = cp * pred;
        const double t_next = (n + 1) * h;

        if (opt.scheme == VieScheme::adams) {
            Scalar hist = tw.w0(n) * gv[0];
            for (int j = 1; j <= n; ++j) hist += tw.inner[n - j] * gv[j];
            hist *= cc;
            auto correct = [&](Scalar& y) {
                for (int it = 0; it < opt.max_corrector_iterations; ++it) {
                    const Scalar next = hist + cc * g(y);
                    const double diff = std::abs(next - y);
                    y = next;
                    if (!std::isfinite(detail::magnitude(y))) return false;
                    if (diff <= opt.corrector_tolerance * std::max(1.0, std::abs(y))) return true;
                }
                return false;
            };
            bool converged = correct(x);
            if constexpr (is_real) {
                if (!converged) {
                    // Stiff transient (h^alpha |G'| near 1): the implicit step is a
                    // quadratic in z = x + e0; take the root that tends to the
                    // explicit value as h -> 0.
                    const double k = hist + r.e0 - cc * r.e1;
                    const double disc = 1.0 - 4.0 * cc * k;
                    if (disc >= 0.0) {
                        x = 2.0 * k / (1.0 + std::sqrt(disc)) - r.e0;
                        converged = true;
                    }
                }
            }
            if (!converged) {
                const Scalar f_last = sol.values.back();
                if constexpr (is_real) {
                    // Past the grid's resolution limit on the way up: blow-up.
                    if (f_last > 0.0 && f_last + r.e0 > 0.0 && n > 0) {
                        sol.blew_up = true;
                        sol.blowup_time = detail::profile_blowup_time(a, sol.grid.back(), f_last);
                        return sol;
                    }
                }
                throw NumericalError("corrector did not converge; refine the grid");
            }
        }

        if (!std::isfinite(detail::magnitude(x)) || detail::magnitude(x) > opt.blowup_threshold) {
            sol.blew_up = true;
            const double mag = std::isfinite(detail::magnitude(x)) ? detail::magnitude(x) : opt.blowup_threshold;
            sol.blowup_time = detail::profile_blowup_time(a, t_next, mag);
            return sol;
        }
        sol.grid.push_back(t_next);
        sol.values.push_back(x);
        gv.push_back(g(x));
    }
    return sol;
}

template <class Scalar>
void write_csv(std::ostream& os, const VieSolution<Scalar>& sol) {
    os << "t,re_f,im_f\n";
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const std::complex<double> f(sol.values[i]);
        os << format_number(sol.grid[i]) << ',' << format_number(f.real()) << ',' << format_number(f.imag()) << '\n';
    }
}

struct OracleOptions {
    int initial_steps = 512;
    int min_steps = 0;
    int max_steps = 1 << 14;
    double rel_tol = 5e-3;
    VieOptions vie{};
};

// Explosion time from VIE blow-up. Cases C and D return +inf directly.
// Otherwise t_end grows geometrically from the lower bound until a blow-up
// is seen, then the grid is doubled until two estimates agree to rel_tol.
inline ExplosionResult blowup_time_oracle(const ModelParams& p, double u, const OracleOptions& opt = {}) {
    ExplosionResult res;
    res.method = Method::vie_oracle;
    res.moment_case = classify(p, u);
    if (!has_finite_explosion(res.moment_case)) {
        res.diagnostics.previous = res.diagnostics.last = res.value;
        res.diagnostics.relative_gap = 0.0;
        return res;
    }
    const Sandwich sw = wellposed_sandwich(p, u);
    const double t_cap = sw.upper * 1.05;

    int steps = opt.initial_steps;
    auto attempt = [&](double t_end) -> std::optional<double> {
        for (;;) {
            try {
                auto sol = solve_vie<double>(p, u, t_end, steps, opt.vie);
                if (sol.blew_up) return sol.blowup_time;
                return std::nullopt;
            } catch (const NumericalError&) {
                if (steps >= opt.max_steps) throw;
                steps *= 2;
            }
        }
    };

    double t_end = sw.lower;
    std::optional<double> est;
    while (!(est = attempt(t_end))) {
        if (t_end >= t_cap) throw NumericalError("no blow-up detected below the upper bound");
        t_end = std::min(2.0 * t_end, t_cap);
    }

    double prev = *est;
    double last = *est;
    int last_steps = steps;
    res.diagnostics.last_order = steps;
    bool converged = false;
    while (steps < opt.max_steps) {
        steps *= 2;
        double te = std::min(1.25 * last, t_cap);
        std::optional<double> e;
        while (!(e = attempt(te))) {
            if (te >= t_cap) throw NumericalError("blow-up lost under refinement");
            te = std::min(1.5 * te, t_cap);
        }
        prev = last;
        last = *e;
        res.diagnostics.previous_order = last_steps;
        res.diagnostics.last_order = steps;
        last_steps = steps;
        if (relative_gap(prev, last) <= opt.rel_tol && steps >= opt.min_steps) {
            converged = true;
            break;
        }
    }
    res.value = last;
    res.diagnostics.previous = prev;
    res.diagnostics.last = last;
    res.diagnostics.relative_gap = relative_gap(prev, last);
    res.diagnostics.converged = converged;
    return res;
}

// mgf along a VIE solution: exp(vbar lambda I^1 psi + v0 I^{1-a} psi), psi = f / c3.
template <class Scalar>
std::vector<Scalar> mgf_path(const ModelParams& p, const VieSolution<Scalar>& sol) {
    const std::size_t M = sol.values.size();
    const double c3 = p.xi * p.xi / 2.0;
    const double h = sol.step;
    const double b = 1.0 - p.alpha;
    const int n_inner = static_cast<int>(M);
    const detail::TrapezoidWeights tw(b, n_inner);
    const double cb = std::pow(h, b) / std::exp(numerics::log_gamma(b + 2.0));

    std::vector<Scalar> psi(M);
    for (std::size_t i = 0; i < M; ++i) psi[i] = sol.values[i] / c3;

    std::vector<Scalar> out(M);
    Scalar i1(0.0);
    out[0] = Scalar(1.0);
    for (std::size_t m = 1; m < M; ++m) {
        i1 += h * (psi[m - 1] + psi[m]) / 2.0;
        const int n = static_cast<int>(m) - 1;
        Scalar ib = psi[m] + tw.w0(n) * psi[0];
        for (int j = 1; j <= n; ++j) ib += tw.inner[n - j] * psi[j];
        ib *= cb;
        out[m] = std::exp(p.vbar * p.lambda * i1 + p.v0 * ib);
    }
    return out;
}

inline constexpr int kDefaultMgfSteps = 2048;

// Moment generating function E[S_t^u] / S_0^u.
template <class Scalar>
Scalar mgf(const ModelParams& p, Scalar u, double t, int steps = kDefaultMgfSteps) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("t must be non-negative and finite");
    if (t == 0.0) return Scalar(1.0);
    const double re = std::real(std::complex<double>(u));
    if (has_finite_explosion(classify(p, re))) {
        const double t_star = blowup_time_oracle(p, re).value;
        if (t >= t_star) throw ExplosionError("t is at or past the explosion time of Re(u)");
    }
    const auto sol = solve_vie<Scalar>(p, u, t, steps);
    if (sol.blew_up) throw ExplosionError("solution blew up before t");
    return mgf_path(p, sol).back();
}

} // namespace roughex
