#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "casdlab/error.hpp"

namespace casdlab {

using complexd = std::complex<double>;

// =============================================================================
// Piecewise periodic waveforms
// =============================================================================

enum class segment_kind { constant, ramp, exponential };

/// One piece of a periodic waveform. Exponential segments relax from v_start
/// toward v_end with time constant tau; they end wherever the decay has got to
/// when the segment runs out, which is generally short of v_end.
struct segment {
    segment_kind kind = segment_kind::constant;
    double duration = 0.0;  // s, > 0
    double v_start = 0.0;   // V
    double v_end = 0.0;     // V
    double tau = 0.0;       // s, exponential segments only

    static segment constant(double level, double duration) {
        return {segment_kind::constant, duration, level, level, 0.0};
    }
    static segment ramp(double v0, double v1, double duration) {
        return {segment_kind::ramp, duration, v0, v1, 0.0};
    }
    static segment exponential(double v0, double v_target, double duration, double tau) {
        return {segment_kind::exponential, duration, v0, v_target, tau};
    }

    /// Value at local time u in [0, duration].
    double value_at(double u) const {
        switch (kind) {
            case segment_kind::constant: return v_start;
            case segment_kind::ramp: return v_start + (v_end - v_start) * (u / duration);
            case segment_kind::exponential:
                return v_end + (v_start - v_end) * std::exp(-u / tau);
        }
        return v_start;
    }

    double end_value() const { return value_at(duration); }
};

/// Fundamental Fourier coefficient, convention c1 = (2/T) * integral over one
/// period of v(t)*exp(-j*w*t) dt, so a cosine of amplitude A gives c1 = A.
struct harmonic {
    double re = 0.0;
    double im = 0.0;

    harmonic() = default;
    harmonic(double r, double i) : re(r), im(i) {}
    harmonic(complexd c) : re(c.real()), im(c.imag()) {}

    complexd as_complex() const { return {re, im}; }
    double magnitude() const { return std::hypot(re, im); }
};

class periodic_waveform {
public:
    periodic_waveform(double period, std::vector<segment> segments)
        : period_(period), segments_(std::move(segments)) {
        if (period_ <= 0.0) throw error("invalid-waveform", "period must be positive");
        if (segments_.empty()) throw error("invalid-waveform", "waveform needs at least one segment");
        double sum = 0.0;
        for (const auto& s : segments_) {
            if (!(s.duration > 0.0))
                throw error("invalid-waveform", "segment durations must be positive");
            if (s.kind == segment_kind::exponential && !(s.tau > 0.0))
                throw error("invalid-waveform", "exponential segments need tau > 0");
            sum += s.duration;
        }
        if (std::abs(sum - period_) > 1e-12 * period_)
            throw error("invalid-waveform", "segment durations do not sum to the period");
    }

    double period() const { return period_; }
    double omega() const { return 2.0 * pi() / period_; }
    const std::vector<segment>& segments() const { return segments_; }

    /// Value at absolute time t (wrapped into [0, T)).
    double value_at(double t) const {
        double u = std::fmod(t, period_);
        if (u < 0.0) u += period_;
        for (const auto& s : segments_) {
            if (u < s.duration || &s == &segments_.back()) return s.value_at(std::min(u, s.duration));
            u -= s.duration;
        }
        return segments_.back().end_value();
    }

    double max_abs_value() const {
        double m = 0.0;
        for (const auto& s : segments_) {
            m = std::max(m, std::abs(s.v_start));
            m = std::max(m, std::abs(s.end_value()));
            // decaying exponentials stay between v_start and the end value
        }
        return m;
    }

    static constexpr double pi() { return 3.141592653589793238462643383279502884; }

private:
    double period_;
    std::vector<segment> segments_;
};

// =============================================================================
// Fundamental coefficient: quadrature and closed forms
// =============================================================================

namespace detail {

/// Base integral of one segment against exp(-j*w*u) over [0, d], local time.
inline complexd segment_base_integral(const segment& s, double w) {
    const complexd jw(0.0, w);
    const double d = s.duration;
    const complexd box = (1.0 - std::exp(-jw * d)) / jw;  // integral of 1
    switch (s.kind) {
        case segment_kind::constant:
            return s.v_start * box;
        case segment_kind::ramp: {
            const double m = (s.v_end - s.v_start) / d;
            // integral of u*exp(-j*w*u) over [0, d]
            const complexd tmoment = (1.0 - std::exp(-jw * d) * (1.0 + jw * d)) / (jw * jw);
            return s.v_start * box + m * tmoment;
        }
        case segment_kind::exponential: {
            const complexd p = 1.0 / s.tau + jw;
            const complexd decay = (1.0 - std::exp(-p * d)) / p;
            return s.v_end * box + (s.v_start - s.v_end) * decay;
        }
    }
    return {0.0, 0.0};
}

/// Composite Simpson of f(u)*exp(-j*w*(t0+u)) over the segment, n panels.
inline complexd segment_simpson(const segment& s, double w, double t0, std::size_t n) {
    if (n < 2) n = 2;
    if (n % 2 == 1) ++n;
    const double h = s.duration / static_cast<double>(n);
    complexd acc{0.0, 0.0};
    for (std::size_t i = 0; i <= n; ++i) {
        const double u = h * static_cast<double>(i);
        const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += weight * s.value_at(u) * std::polar(1.0, -w * (t0 + u));
    }
    return acc * (h / 3.0);
}

}  // namespace detail

/// Quadrature evaluation of c1. Samples are distributed over the segments in
/// proportion to their durations so no panel straddles a discontinuity.
inline harmonic fundamental_numeric(const periodic_waveform& w, std::size_t n_samples = 1u << 20) {
    if (n_samples < 1024)
        throw error("invalid-argument", "fundamental_numeric needs at least 1024 samples");
    const double omega = w.omega();
    complexd acc{0.0, 0.0};
    double t0 = 0.0;
    for (const auto& s : w.segments()) {
        auto n = static_cast<std::size_t>(
            std::ceil(static_cast<double>(n_samples) * s.duration / w.period()));
        if (n < 8) n = 8;
        acc += detail::segment_simpson(s, omega, t0, n);
        t0 += s.duration;
    }
    return harmonic((2.0 / w.period()) * acc);
}

/// Closed-form evaluation of c1 from per-segment integrals.
inline harmonic fundamental_analytic(const periodic_waveform& w) {
    const double omega = w.omega();
    complexd acc{0.0, 0.0};
    double t0 = 0.0;
    for (const auto& s : w.segments()) {
        acc += std::polar(1.0, -omega * t0) * detail::segment_base_integral(s, omega);
        t0 += s.duration;
    }
    return harmonic((2.0 / w.period()) * acc);
}

// =============================================================================
// Class-D output shapes under drive-signal delay mismatch
// =============================================================================

/// Two-level output of a stacked switching stage whose gate drives are skewed
/// by t_ms. The full level 2*vdd holds for t_c - t_ms of each half period; the
/// skew window sits at the midpoint level vdd (equal switch impedances), so
/// each half carries one vdd step of width t_ms next to the falling edge.
inline periodic_waveform build_ideal_mismatch(double vdd, double t_c, double t_ms) {
    if (!(vdd > 0.0) || !(t_c > 0.0)) throw error("invalid-argument", "vdd and t_c must be positive");
    if (t_ms < 0.0 || t_ms >= t_c) throw error("invalid-argument", "need 0 <= t_ms < t_c");
    std::vector<segment> segs;
    if (t_ms == 0.0) {
        segs.push_back(segment::constant(2.0 * vdd, t_c));
        segs.push_back(segment::constant(0.0, t_c));
    } else {
        segs.push_back(segment::constant(2.0 * vdd, t_c - t_ms));
        segs.push_back(segment::constant(vdd, t_ms));
        segs.push_back(segment::constant(vdd, t_ms));
        segs.push_back(segment::constant(0.0, t_c - t_ms));
    }
    return periodic_waveform(2.0 * t_c, std::move(segs));
}

/// Output of the same stage with finite switch resistance and load capacitance.
/// Each transition starts with a contention ramp toward the midpoint level vdd
/// and hands over to an RC relaxation (time constant tau) toward the target
/// rail; the relaxation runs until the next transition, so the plateaus are the
/// settled tails of the exponentials. The ramp occupies ramp_fraction of the
/// transition window max(t_ms, 3*tau), capped at 0.2*t_c. t_ms = 0 degenerates
/// to the plain square wave.
inline periodic_waveform build_nonideal_mismatch(double vdd, double t_c, double t_ms,
                                                 double ramp_fraction, double tau) {
    if (!(vdd > 0.0) || !(t_c > 0.0)) throw error("invalid-argument", "vdd and t_c must be positive");
    if (t_ms < 0.0 || t_ms >= t_c) throw error("invalid-argument", "need 0 <= t_ms < t_c");
    if (!(tau > 0.0)) throw error("invalid-argument", "tau must be positive");
    if (ramp_fraction < 0.0 || ramp_fraction > 1.0)
        throw error("invalid-argument", "ramp_fraction must lie in [0, 1]");
    if (t_ms == 0.0) return build_ideal_mismatch(vdd, t_c, 0.0);

    const double t_tr = std::min(std::max(t_ms, 3.0 * tau), 0.2 * t_c);
    const double t_r = ramp_fraction * t_tr;
    const double t_e = t_c - t_r;  // relaxation fills the rest of the half period
    const double k = std::exp(-t_e / tau);

    std::vector<segment> segs;
    if (t_r > 0.0) {
        // Plateau tails settle from the midpoint anchor: e_hi = 2*vdd - vdd*k.
        const double e_hi = 2.0 * vdd - vdd * k;
        const double e_lo = vdd * k;
        segs.push_back(segment::ramp(e_lo, vdd, t_r));
        segs.push_back(segment::exponential(vdd, 2.0 * vdd, t_e, tau));
        segs.push_back(segment::ramp(e_hi, vdd, t_r));
        segs.push_back(segment::exponential(vdd, 0.0, t_e, tau));
    } else {
        // No ramp portion: pure alternating relaxations; fixed point of the
        // half-period map gives the end levels.
        const double e_hi = 2.0 * vdd / (1.0 + k);
        const double e_lo = 2.0 * vdd * k / (1.0 + k);
        segs.push_back(segment::exponential(e_lo, 2.0 * vdd, t_e + t_r, tau));
        segs.push_back(segment::exponential(e_hi, 0.0, t_e + t_r, tau));
    }
    return periodic_waveform(2.0 * t_c, std::move(segs));
}

// =============================================================================
// Helpers
// =============================================================================

/// Waveform shifted left by t0: returns w(t + t0) as a new waveform.
inline periodic_waveform rotated(const periodic_waveform& w, double t0) {
    const double T = w.period();
    double off = std::fmod(t0, T);
    if (off < 0.0) off += T;
    if (off == 0.0) return w;

    // split the segment containing the cut point, then rotate
    std::vector<segment> pieces;
    double acc = 0.0;
    std::size_t cut_index = 0;
    double cut_local = 0.0;
    const auto& segs = w.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (off < acc + segs[i].duration || i + 1 == segs.size()) {
            cut_index = i;
            cut_local = std::min(off - acc, segs[i].duration);
            break;
        }
        acc += segs[i].duration;
    }

    auto split = [](const segment& s, double u) -> std::pair<segment, segment> {
        segment first = s, second = s;
        first.duration = u;
        first.v_end = (s.kind == segment_kind::exponential) ? s.v_end : s.value_at(u);
        second.duration = s.duration - u;
        second.v_start = s.value_at(u);
        return {first, second};
    };

    std::vector<segment> out;
    if (cut_local > 0.0 && cut_local < segs[cut_index].duration) {
        auto [first, second] = split(segs[cut_index], cut_local);
        out.push_back(second);
        for (std::size_t i = cut_index + 1; i < segs.size(); ++i) out.push_back(segs[i]);
        for (std::size_t i = 0; i < cut_index; ++i) out.push_back(segs[i]);
        out.push_back(first);
    } else {
        std::size_t start = (cut_local == 0.0) ? cut_index : cut_index + 1;
        for (std::size_t i = 0; i < segs.size(); ++i)
            out.push_back(segs[(start + i) % segs.size()]);
    }
    return periodic_waveform(T, std::move(out));
}

/// Uniformly sampled (t, v) table, e.g. for CSV export.
inline std::vector<std::pair<double, double>> sample_waveform(const periodic_waveform& w,
                                                              std::size_t n_samples) {
    if (n_samples < 2) throw error("invalid-argument", "need at least 2 samples");
    std::vector<std::pair<double, double>> out;
    out.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = w.period() * static_cast<double>(i) / static_cast<double>(n_samples);
        out.emplace_back(t, w.value_at(t));
    }
    return out;
}

// =============================================================================
// Alternate transcriptions of the section coefficients
// =============================================================================
//
// The derived per-section forms above match the quadrature oracle. The two
// functions below evaluate commonly transcribed variants whose exponent signs
// differ (a growing instead of decaying exponential, and a conjugated ramp
// moment); `validate-eqs` tabulates their deviation from the derived forms so
// transcription errors are caught rather than silently absorbed.

/// Derived slope-only ramp section coefficient: a 0 -> dv ramp occupying a
/// fraction dt_frac of the period, baseline removed.
inline complexd ramp_section_c1(double dv, double dt_frac, double period) {
    const double w = 2.0 * periodic_waveform::pi() / period;
    const double d = dt_frac * period;
    const complexd jw(0.0, w);
    const complexd bracket = 1.0 - std::exp(-jw * d) * (1.0 + jw * d);
    return (2.0 * dv / (dt_frac * period * period)) * bracket / (jw * jw);
}

/// Variant ramp transcription with the time-moment term conjugated.
inline complexd ramp_section_c1_alt(double dv, double dt_frac, double period) {
    const double w = 2.0 * periodic_waveform::pi() / period;
    const complexd jw(0.0, w);
    const complexd j2pidt(0.0, 2.0 * periodic_waveform::pi() * dt_frac);
    const complexd bracket = std::exp(-j2pidt) * (j2pidt - 1.0) + 1.0;
    return (2.0 * dv / (dt_frac * period * period)) * bracket / (jw * jw);
}

/// Derived exponential section coefficient: 0 -> dv saturating rise with time
/// constant tau over a fraction dt_frac of the period.
inline complexd exp_section_c1(double dv, double dt_frac, double period, double tau) {
    const double w = 2.0 * periodic_waveform::pi() / period;
    const double d = dt_frac * period;
    const complexd jw(0.0, w);
    const complexd p = 1.0 / tau + jw;
    return (2.0 * dv / period) * ((1.0 - std::exp(-jw * d)) / jw - (1.0 - std::exp(-p * d)) / p);
}

/// Variant exponential transcription with positive exponents.
inline complexd exp_section_c1_alt(double dv, double dt_frac, double period, double tau) {
    const double w = 2.0 * periodic_waveform::pi() / period;
    const double d = dt_frac * period;
    const complexd jw(0.0, w);
    const complexd p = 1.0 / tau + jw;
    return (2.0 * dv / period) * ((1.0 - std::exp(jw * d)) / jw - (1.0 - std::exp(p * d)) / p);
}

}  // namespace casdlab
