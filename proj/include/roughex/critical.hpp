#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "classical.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "series.hpp"

namespace roughex {

// Odd order: keeps the Algorithm 1 estimate continuous up to the case-A
// boundary, where even-order coefficients vanish.
inline constexpr int kCriticalOrder = 101;

enum class CriticalMethod { algorithm_1_inversion, classical };

inline const char* to_string(CriticalMethod m) {
    return m == CriticalMethod::classical ? "classical" : "algorithm_1_inversion";
}

struct CriticalMomentResult {
    double u_critical;
    Side side;
    double T;
    CriticalMethod method;
    double residual;
    bool monotone_verified = true;
};

// Critical moments on one side for fixed params. The case-A boundary and
// its explosion time are computed once at construction.
class CriticalMomentSolver {
public:
    CriticalMomentSolver(const ModelParams& p, Side side, int n_max = kCriticalOrder)
        : p_(p), side_(side), n_max_(n_max) {
        p_.validate();
        if (p_.alpha == 1.0) {
            method_ = CriticalMethod::classical;
            boundary_ = finite_region_boundary(p_, side_);
            boundary_time_ = t1_star(p_, boundary_);
            return;
        }
        if (side_ == Side::lower && !(p_.rho < 0.0))
            throw DomainError("lower critical moment via algorithm 1 needs rho < 0");
        if (side_ == Side::upper && !(p_.rho > 0.0))
            throw DomainError("upper critical moment via algorithm 1 needs rho > 0");
        double ub = *case_a_boundary(p_);
        if (side_ == Side::upper && ub <= 1.0) {
            // Case A is all of (1, inf); T* grows without bound towards 1.
            boundary_ = 1.0;
            boundary_time_ = std::numeric_limits<double>::infinity();
            return;
        }
        const double dir = side_ == Side::lower ? -std::numeric_limits<double>::infinity()
                                                : std::numeric_limits<double>::infinity();
        while (classify(p_, ub) != MomentCase::A) ub = std::nextafter(ub, dir);
        boundary_ = ub;
        boundary_time_ = explosion_time(ub);
    }

    const ModelParams& params() const { return p_; }
    Side side() const { return side_; }
    CriticalMethod method() const { return method_; }
    double boundary_moment() const { return boundary_; }
    double boundary_time() const { return boundary_time_; }

    double explosion_time(double u) const {
        if (method_ == CriticalMethod::classical) return t1_star(p_, u);
        return algorithm_1_explosion_time(p_, u, n_max_).value;
    }

    CriticalMomentResult solve(double T) const {
        if (!(T > 0.0) || !std::isfinite(T)) throw InputError("maturity must be positive and finite");
        if (method_ == CriticalMethod::classical) {
            const auto c = classical_critical_moment(p_, T, side_);
            if (c.at_boundary)
                throw RangeError("maturity beyond the finite-explosion region", 0.0, boundary_time_);
            return {c.u, side_, T, method_, std::abs(t1_star(p_, c.u) - T), true};
        }
        if (T > boundary_time_)
            throw RangeError("maturity exceeds the case-A explosion time at the boundary (" +
                                 format_number(boundary_time_) + "); valid range is (0, " +
                                 format_number(boundary_time_) + "]",
                             0.0, boundary_time_);

        const double sgn = side_ == Side::lower ? -1.0 : 1.0;
        auto g = [&](double u) { return explosion_time(u) - T; };

        double inner = boundary_;
        if (std::isinf(boundary_time_)) {
            double d = 1.0;
            inner = boundary_ + d;
            while (g(inner) < 0.0) {
                d /= 2.0;
                inner = boundary_ + d;
                if (d < 1e-15) throw NumericalError("no inner bracket near u = 1");
            }
        }
        if (g(inner) == 0.0) return finish(inner, T, true);

        double dist = std::max(1.0, std::abs(inner));
        double outer = inner + sgn * dist;
        while (g(outer) >= 0.0) {
            dist *= 2.0;
            outer = inner + sgn * dist;
            if (!std::isfinite(outer)) throw NumericalError("critical moment bracket expansion failed");
        }

        // Scan the bracket: expect exactly one sign change and monotone values.
        int samples = 16;
        for (;;) {
            std::vector<double> us(samples + 1), gs(samples + 1);
            for (int i = 0; i <= samples; ++i) {
                us[i] = inner + (outer - inner) * i / samples;  // from the boundary outwards
                gs[i] = i == 0 ? g(inner) : (i == samples ? g(outer) : g(us[i]));
            }
            int changes = 0;
            bool monotone = true;
            int first_change = -1;
            for (int i = 0; i < samples; ++i) {
                if ((gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
                    ++changes;
                    if (first_change < 0) first_change = i;
                }
                if (!(gs[i + 1] < gs[i])) monotone = false;
            }
            if ((changes == 1 && monotone) || samples >= 256) {
                // The root closest to the boundary realises the sup/inf characterisation.
                const double lo = std::min(us[first_change], us[first_change + 1]);
                const double hi = std::max(us[first_change], us[first_change + 1]);
                const double tol = 1e-12 * std::max(1.0, std::abs(hi));
                return finish(numerics::find_root(g, lo, hi, tol), T, changes == 1 && monotone);
            }
            samples *= 2;
        }
    }

private:
    CriticalMomentResult finish(double u, double T, bool monotone) const {
        return {u, side_, T, method_, std::abs(explosion_time(u) - T), monotone};
    }

    ModelParams p_;
    Side side_;
    int n_max_;
    CriticalMethod method_ = CriticalMethod::algorithm_1_inversion;
    double boundary_ = 0.0;
    double boundary_time_ = 0.0;
};

inline CriticalMomentResult lower_critical_moment(const ModelParams& p, double T, int n_max = kCriticalOrder) {
    return CriticalMomentSolver(p, Side::lower, n_max).solve(T);
}

inline CriticalMomentResult upper_critical_moment(const ModelParams& p, double T, int n_max = kCriticalOrder) {
    return CriticalMomentSolver(p, Side::upper, n_max).solve(T);
}

// (2 - 4 (sqrt(u^2 - u) + u)) / T for u <= 0, with the bracket rewritten
// as -u / (sqrt(u^2 - u) - u) to avoid cancellation.
inline double lee_slope(double u_minus, double T) {
    if (!(u_minus <= 0.0)) throw DomainError("Lee's formula needs u- <= 0");
    const double bracket = u_minus == 0.0 ? 0.0 : -u_minus / (std::sqrt(u_minus * u_minus - u_minus) - u_minus);
    return (2.0 - 4.0 * bracket) / T;
}

inline double lee_left_wing_slope(const ModelParams& p, double T) {
    return lee_slope(lower_critical_moment(p, T).u_critical, T);
}

struct TailExponents {
    double left;
    std::optional<double> right;
    std::string right_note;
};

inline TailExponents tail_exponents(const ModelParams& p, double T) {
    TailExponents out{-lower_critical_moment(p, T).u_critical - 1.0, std::nullopt, {}};
    if (p.rho > 0.0 || p.alpha == 1.0)
        out.right = -upper_critical_moment(p, T).u_critical - 1.0;
    else
        out.right_note = "upper critical moment needs rho > 0";
    return out;
}

} // namespace roughex
