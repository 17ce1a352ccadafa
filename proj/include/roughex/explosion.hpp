#pragma once

#include <cmath>
#include <limits>

#include "model.hpp"

namespace roughex {

enum class Method { closed_form, algorithm_1, algorithm_2_lower_bound, bound_lower, bound_upper, vie_oracle };

inline const char* to_string(Method m) {
    switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::algorithm_1: return "algorithm_1";
    case Method::algorithm_2_lower_bound: return "algorithm_2_lower_bound";
    case Method::bound_lower: return "bound_lower";
    case Method::bound_upper: return "bound_upper";
    case Method::vie_oracle: return "vie_oracle";
    }
    return "?";
}

// The last two successive estimates behind a result.
struct Diagnostics {
    double previous = std::numeric_limits<double>::quiet_NaN();
    double last = std::numeric_limits<double>::quiet_NaN();
    double relative_gap = std::numeric_limits<double>::quiet_NaN();
    int previous_order = 0;
    int last_order = 0;
    bool converged = true;
};

inline double relative_gap(double previous, double last) {
    if (std::isinf(previous) && std::isinf(last)) return 0.0;
    return std::abs(last - previous) / std::abs(last);
}

struct ExplosionResult {
    double value = std::numeric_limits<double>::infinity();
    Method method = Method::closed_form;
    MomentCase moment_case = MomentCase::D;
    Diagnostics diagnostics{};

    bool finite() const { return std::isfinite(value); }
};

} // namespace roughex
