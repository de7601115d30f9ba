#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "casdlab/error.hpp"

namespace casdlab {

// =============================================================================
// Behavioral long-channel MOSFET
// =============================================================================
//
// Deliberately technology-agnostic: square law with channel-length modulation,
// an optional subthreshold tail for leakage studies, and lumped constant
// capacitances. Terminal voltages are polarity-normalized (see normalized_op),
// so N and P share one set of equations. Body effect is accepted but unused.

enum class polarity { nmos, pmos };
enum class region { cutoff, triode, saturation };

struct mosfet_params {
    polarity pol = polarity::nmos;
    double vth = 0.4;                // threshold magnitude (V), > 0
    double kp = 4e-4;                // transconductance factor (A/V^2), > 0
    double lambda = 0.0;             // channel-length modulation (1/V), >= 0
    double cgs = 0.0, cgd = 0.0, cdb = 0.0;  // lumped capacitances (F), >= 0
    double subthreshold_i0 = 0.0;    // leakage prefactor (A), >= 0
    double subthreshold_n = 1.5;     // slope factor, >= 1

    void validate() const {
        if (!(vth > 0.0)) throw error("invalid-deck", "vth must be positive");
        if (!(kp > 0.0)) throw error("invalid-deck", "kp must be positive");
        if (lambda < 0.0) throw error("invalid-deck", "lambda must be non-negative");
        if (cgs < 0.0 || cgd < 0.0 || cdb < 0.0)
            throw error("invalid-deck", "capacitances must be non-negative");
        if (subthreshold_i0 < 0.0) throw error("invalid-deck", "i0 must be non-negative");
        if (subthreshold_n < 1.0) throw error("invalid-deck", "slope factor must be >= 1");
    }
};

/// Polarity-normalized terminal voltages.
struct operating_point {
    double vgs = 0.0;
    double vds = 0.0;
    double vbs = 0.0;  // accepted, unused
};

/// Sentinel for infinite output resistance (lambda = 0 or zero conductance).
inline constexpr double ro_infinite = std::numeric_limits<double>::infinity();

struct small_signal {
    double gm = 0.0;      // S
    double ro = ro_infinite;  // ohm
    region reg = region::cutoff;
};

/// Thermal voltage, 25.85 mV at 27 C, linear in absolute temperature.
inline double thermal_voltage(double temp_c = 27.0) {
    return 0.02585 * (temp_c + 273.15) / 300.15;
}

/// Map absolute terminal voltages onto the shared N-type convention.
inline operating_point normalized_op(polarity pol, double vg, double vd, double vs,
                                     double vb = 0.0) {
    const double s = (pol == polarity::nmos) ? 1.0 : -1.0;
    return {s * (vg - vs), s * (vd - vs), s * (vb - vs)};
}

inline region region_of(const mosfet_params& p, const operating_point& op) {
    if (op.vgs < p.vth) return region::cutoff;
    if (op.vds < op.vgs - p.vth) return region::triode;
    return region::saturation;  // boundary vds == vov counts as saturation
}

namespace detail {

/// Subthreshold tail. The gate overdrive is clamped at zero above threshold so
/// the tail continues as a constant floor and the total current stays exactly
/// continuous at vgs = vth. The drain factor (1 - exp(-vds/VT)) kills the tail
/// at vds = 0 and the (1 + lambda*vds) term keeps leakage supply-dependent.
inline double subthreshold_current(const mosfet_params& p, const operating_point& op,
                                   double temp_c) {
    if (p.subthreshold_i0 <= 0.0) return 0.0;
    const double vt = thermal_voltage(temp_c);
    const double gate = std::exp(std::min(op.vgs - p.vth, 0.0) / (p.subthreshold_n * vt));
    const double drain = 1.0 - std::exp(-std::max(op.vds, 0.0) / vt);
    return p.subthreshold_i0 * gate * drain * (1.0 + p.lambda * std::max(op.vds, 0.0));
}

}  // namespace detail

/// Drain current for vds >= 0 in the normalized convention. The triode branch
/// carries the same (1 + lambda*vds) factor as saturation so the current is
/// continuous across the region boundary.
inline double drain_current(const mosfet_params& p, const operating_point& op,
                            bool leakage_enabled = false, double temp_c = 27.0) {
    const double leak = leakage_enabled ? detail::subthreshold_current(p, op, temp_c) : 0.0;
    const double vov = op.vgs - p.vth;
    if (vov <= 0.0) return leak;
    if (op.vds < vov)
        return p.kp * (vov * op.vds - 0.5 * op.vds * op.vds) * (1.0 + p.lambda * op.vds) + leak;
    return 0.5 * p.kp * vov * vov * (1.0 + p.lambda * op.vds) + leak;
}

/// Current plus its partial derivatives, used by the Newton assembly.
struct device_eval {
    double i = 0.0;    // A
    double gm = 0.0;   // dI/dvgs (S)
    double gds = 0.0;  // dI/dvds (S)
};

inline device_eval drain_current_with_derivatives(const mosfet_params& p,
                                                  const operating_point& op,
                                                  bool leakage_enabled = false,
                                                  double temp_c = 27.0) {
    device_eval e;
    const double vov = op.vgs - p.vth;
    if (vov > 0.0) {
        const double clm = 1.0 + p.lambda * op.vds;
        if (op.vds < vov) {
            const double shape = vov * op.vds - 0.5 * op.vds * op.vds;
            e.i = p.kp * shape * clm;
            e.gm = p.kp * op.vds * clm;
            e.gds = p.kp * (vov - op.vds) * clm + p.kp * shape * p.lambda;
        } else {
            e.i = 0.5 * p.kp * vov * vov * clm;
            e.gm = p.kp * vov * clm;
            e.gds = 0.5 * p.kp * vov * vov * p.lambda;
        }
    }
    if (leakage_enabled && p.subthreshold_i0 > 0.0) {
        const double vt = thermal_voltage(temp_c);
        const double nvt = p.subthreshold_n * vt;
        const double vds = std::max(op.vds, 0.0);
        const double gate = std::exp(std::min(op.vgs - p.vth, 0.0) / nvt);
        const double drain = 1.0 - std::exp(-vds / vt);
        const double clm = 1.0 + p.lambda * vds;
        const double leak = p.subthreshold_i0 * gate * drain * clm;
        e.i += leak;
        if (op.vgs < p.vth) e.gm += leak / nvt;
        if (op.vds > 0.0)
            e.gds += p.subthreshold_i0 * gate *
                     (std::exp(-vds / vt) / vt * clm + drain * p.lambda);
    }
    return e;
}

inline small_signal small_signal_at(const mosfet_params& p, const operating_point& op) {
    small_signal s;
    s.reg = region_of(p, op);
    const double vov = op.vgs - p.vth;
    switch (s.reg) {
        case region::cutoff:
            s.gm = 0.0;
            s.ro = ro_infinite;
            break;
        case region::saturation: {
            s.gm = p.kp * vov * (1.0 + p.lambda * op.vds);
            const double isat0 = 0.5 * p.kp * vov * vov;
            s.ro = (p.lambda > 0.0 && isat0 > 0.0) ? 1.0 / (p.lambda * isat0) : ro_infinite;
            break;
        }
        case region::triode: {
            s.gm = p.kp * op.vds;
            const double gds = p.kp * (vov - op.vds) * (1.0 + p.lambda * op.vds) +
                               p.kp * (vov * op.vds - 0.5 * op.vds * op.vds) * p.lambda;
            s.ro = gds > 0.0 ? 1.0 / gds : ro_infinite;
            break;
        }
    }
    return s;
}

}  // namespace casdlab
