#pragma once

#include <cmath>
#include <limits>

#include "casdlab/device.hpp"
#include "casdlab/error.hpp"

namespace casdlab {

// =============================================================================
// Regenerative-latch input resistance
// =============================================================================
//
// The cross-coupled stage is summarized by three intrinsic-gain products
//   a = gm_p3 * ro_p3,  b = gm_n5 * ro_n5,  c = gm_p5 * ro_p5
// together with r0 = ro_p3 + ro_n5 + ro_p5. The equivalent resistance seen at
// the regeneration nodes is
//   r_eq = -2 * (r0 + ro_p5*(a - b)) / ((1 - c)*(a - b) - c)
// and the denominator vanishes at delta = a - b = c/(1 - c), the sizing point
// of strongest positive feedback. A vanishing denominator is reported through
// the `singular` flag, not as an error.

struct abc_factors {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double r0 = 0.0;     // ro_p3 + ro_n5 + ro_p5 (ohm)
    double ro_p5 = 0.0;  // ohm

    double delta() const { return a - b; }
};

struct equivalent_resistance {
    double value = 0.0;     // ohm, signed; +/-inf when singular
    bool singular = false;
};

/// Build the substitution factors from device small-signal values. The latch
/// algebra needs finite output resistances, so lambda = 0 decks are rejected.
inline abc_factors abc_from_small_signal(const small_signal& p3, const small_signal& n5,
                                         const small_signal& p5) {
    for (const small_signal* s : {&p3, &n5, &p5}) {
        if (!std::isfinite(s->ro) || !(s->ro > 0.0))
            throw error("infinite-ro", "latch analysis requires finite positive ro");
        if (s->gm < 0.0) throw error("invalid-argument", "gm must be non-negative");
    }
    abc_factors f;
    f.a = p3.gm * p3.ro;
    f.b = n5.gm * n5.ro;
    f.c = p5.gm * p5.ro;
    f.r0 = p3.ro + n5.ro + p5.ro;
    f.ro_p5 = p5.ro;
    return f;
}

namespace detail {

inline equivalent_resistance reduce_r_eq(double numerator, double denominator, double den_scale) {
    equivalent_resistance r;
    r.singular = std::abs(denominator) < 1e-12 * std::max(1.0, den_scale);
    if (r.singular) {
        const double sign = (denominator != 0.0)
                                ? (numerator / denominator >= 0.0 ? 1.0 : -1.0)
                                : (numerator >= 0.0 ? 1.0 : -1.0);
        r.value = sign * std::numeric_limits<double>::infinity();
    } else {
        r.value = numerator / denominator;
    }
    return r;
}

}  // namespace detail

/// Full expanded form: -2*(r0 + ro_p5*(a-b)) / (a - c - b + c*b - a*c).
inline equivalent_resistance r_eq_full(const abc_factors& f) {
    const double num = -2.0 * (f.r0 + f.ro_p5 * (f.a - f.b));
    const double den = f.a - f.c - f.b + f.c * f.b - f.a * f.c;
    const double scale =
        std::abs(f.a) + std::abs(f.b) + std::abs(f.c) + std::abs(f.c * f.b) + std::abs(f.a * f.c);
    return detail::reduce_r_eq(num, den, scale);
}

/// Fractional-linear form in delta = a - b: -2*(r0 + ro_p5*delta)/((1-c)*delta - c).
inline equivalent_resistance r_eq_delta(double delta, double c, double r0, double ro_p5) {
    const double num = -2.0 * (r0 + ro_p5 * delta);
    const double den = (1.0 - c) * delta - c;
    const double scale = std::abs((1.0 - c) * delta) + std::abs(c);
    return detail::reduce_r_eq(num, den, scale);
}

/// Sizing condition that zeroes the denominator: delta* = c / (1 - c).
inline double critical_delta(double c) {
    if (c == 1.0) throw error("critical-delta-divergent", "sizing condition diverges at c = 1");
    return c / (1.0 - c);
}

}  // namespace casdlab
