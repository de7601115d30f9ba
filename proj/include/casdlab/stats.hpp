#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "casdlab/error.hpp"
#include "casdlab/netlist.hpp"

namespace casdlab {

// =============================================================================
// Counter-based Gaussian stream
// =============================================================================
//
// Every draw is a pure function of (seed, sample, stream, counter), so any
// sample is reproducible in isolation and concurrent evaluation cannot change
// the numbers.

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t stream,
                        std::uint64_t counter) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ mix64(sample));
    h = mix64(h ^ mix64(stream));
    h = mix64(h ^ mix64(counter));
    // 53-bit mantissa in (0, 1]
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

/// Standard normal draw, Box-Muller over the counter-based stream.
inline double gaussian_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t stream) {
    const double u1 = detail::uniform01(seed, sample, stream, 0);
    const double u2 = detail::uniform01(seed, sample, stream, 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

// =============================================================================
// Process variation sampling
// =============================================================================

struct variation_spec {
    double vth_sigma = 0.02;     // absolute (V)
    double kp_rel_sigma = 0.05;  // relative
    enum class correlation { per_device, shared } mode = correlation::per_device;
    std::uint64_t seed = 1;
};

/// Gaussian-perturbed copy of a deck for one (sample, device) pair.
inline mosfet_params perturb_deck(const mosfet_params& nominal, const variation_spec& spec,
                                  std::uint64_t sample, std::uint64_t device_stream) {
    const std::uint64_t stream =
        (spec.mode == variation_spec::correlation::shared) ? 0 : device_stream;
    mosfet_params p = nominal;
    p.vth = std::max(1e-3, p.vth + spec.vth_sigma * gaussian_draw(spec.seed, sample, 2 * stream));
    p.kp = std::max(1e-12, p.kp * (1.0 + spec.kp_rel_sigma *
                                             gaussian_draw(spec.seed, sample, 2 * stream + 1)));
    return p;
}

/// n independently perturbed decks; deterministic under a fixed seed.
inline std::vector<mosfet_params> sample_variations(const variation_spec& spec,
                                                    const mosfet_params& deck, std::size_t n) {
    if (n < 1) throw error("invalid-argument", "need n >= 1");
    std::vector<mosfet_params> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(perturb_deck(deck, spec, i, 0));
    return out;
}

/// Per-element perturbed copy of a circuit for Monte Carlo sample `sample`.
/// per_device mode gives every mosfet its own draw; shared mode applies one
/// draw to all of them.
inline circuit perturb_circuit(const circuit& c, const variation_spec& spec, std::uint64_t sample) {
    circuit out = c;
    std::uint64_t device = 0;
    for (auto& e : out.elements) {
        if (e.k != element::kind::mosfet) continue;
        auto it = out.models.find(e.model);
        if (it == out.models.end()) throw error("unresolved-model", "model " + e.model);
        e.params_override = perturb_deck(it->second.params, spec, sample, device);
        ++device;
    }
    return out;
}

// =============================================================================
// Summary statistics
// =============================================================================

struct histogram {
    std::vector<double> edges;       // 31 edges for 30 bins
    std::vector<std::size_t> counts; // 30 bins
};

struct summary {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;               // unbiased
    double within_3sigma = 0.0;     // fraction inside mean +/- 3*std
    histogram hist;
};

inline summary summarize(const std::vector<double>& values) {
    if (values.empty()) throw error("empty-input", "summarize needs at least one value");
    summary s;
    s.n = values.size();
    double acc = 0.0;
    for (double v : values) acc += v;
    s.mean = acc / static_cast<double>(s.n);

    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }

    std::size_t inside = 0;
    for (double v : values)
        if (std::abs(v - s.mean) <= 3.0 * s.std) ++inside;
    s.within_3sigma = static_cast<double>(inside) / static_cast<double>(s.n);

    constexpr int bins = 30;
    const double half_span = 4.0 * s.std;
    const double lo = s.mean - half_span;
    const double width = (half_span > 0.0) ? (2.0 * half_span / bins) : 1.0;
    s.hist.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) s.hist.edges[b] = lo + b * width;
    s.hist.counts.assign(bins, 0);
    for (double v : values) {
        int b = static_cast<int>(std::floor((v - lo) / width));
        b = std::clamp(b, 0, bins - 1);  // clamp outliers into the edge bins
        ++s.hist.counts[b];
    }
    return s;
}

// =============================================================================
// Monte Carlo driver
// =============================================================================

struct mc_result {
    std::size_t n = 0;
    std::vector<double> values;              // successful samples, input order
    std::vector<std::size_t> sample_index;   // originating sample per value
    std::vector<std::size_t> failed;         // failed sample indices
    summary stats;
};

/// Evaluate `measure` on n perturbed copies of the circuit. Failed samples are
/// recorded, not dropped silently; the summary covers the successes.
inline mc_result run_monte_carlo(const circuit& c,
                                 const std::function<double(const circuit&)>& measure,
                                 const variation_spec& spec, std::size_t n) {
    try {
        (void)measure(c);
    } catch (const std::exception& e) {
        throw error("nominal-failure", std::string("nominal run failed: ") + e.what());
    }

    mc_result res;
    res.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        try {
            const double v = measure(perturb_circuit(c, spec, i));
            res.values.push_back(v);
            res.sample_index.push_back(i);
        } catch (const std::exception&) {
            res.failed.push_back(i);
        }
    }
    if (!res.values.empty()) res.stats = summarize(res.values);
    return res;
}

/// Monte Carlo over a plain metric function, for synthetic studies and for
/// metrics that consume the deck directly.
inline mc_result run_monte_carlo_metric(const std::function<double(const mosfet_params&)>& metric,
                                        const mosfet_params& nominal, const variation_spec& spec,
                                        std::size_t n) {
    try {
        (void)metric(nominal);
    } catch (const std::exception& e) {
        throw error("nominal-failure", std::string("nominal run failed: ") + e.what());
    }
    mc_result res;
    res.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        try {
            res.values.push_back(metric(perturb_deck(nominal, spec, i, 0)));
            res.sample_index.push_back(i);
        } catch (const std::exception&) {
            res.failed.push_back(i);
        }
    }
    if (!res.values.empty()) res.stats = summarize(res.values);
    return res;
}

}  // namespace casdlab
