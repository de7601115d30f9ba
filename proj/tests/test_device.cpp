#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "casdlab/device.hpp"

using namespace casdlab;
using Catch::Approx;

namespace {

mosfet_params test_deck(double lambda = 0.0) {
    mosfet_params p;
    p.vth = 0.4;
    p.kp = 1e-3;
    p.lambda = lambda;
    return p;
}

}  // namespace

TEST_CASE("drain current regions", "[device]") {
    const auto p = test_deck();

    SECTION("cutoff returns zero with leakage off") {
        REQUIRE(drain_current(p, {0.2, 0.5, 0.0}) == 0.0);
    }
    SECTION("saturation worked example") {
        // (kp/2)(0.3)^2 = 45 uA
        REQUIRE(drain_current(p, {0.7, 0.5, 0.0}) == Approx(45e-6));
    }
    SECTION("triode worked example") {
        // kp (0.3*0.1 - 0.005) = 25 uA
        REQUIRE(drain_current(p, {0.7, 0.1, 0.0}) == Approx(25e-6));
    }
}

TEST_CASE("region classification", "[device]") {
    const auto p = test_deck();
    REQUIRE(region_of(p, {0.2, 0.5, 0.0}) == region::cutoff);
    REQUIRE(region_of(p, {0.7, 0.5, 0.0}) == region::saturation);
    REQUIRE(region_of(p, {0.7, 0.1, 0.0}) == region::triode);
    // the boundary counts as saturation
    REQUIRE(region_of(p, {0.7, 0.3, 0.0}) == region::saturation);
}

TEST_CASE("small-signal quantities", "[device]") {
    SECTION("lambda = 0 gives the infinite-ro sentinel") {
        const auto s = small_signal_at(test_deck(), {0.7, 0.5, 0.0});
        REQUIRE(s.reg == region::saturation);
        REQUIRE(std::isinf(s.ro));
        REQUIRE(s.gm == Approx(0.3e-3));
    }
    SECTION("finite lambda worked example") {
        const auto s = small_signal_at(test_deck(0.1), {0.7, 0.5, 0.0});
        // ro = 1/(lambda * 45 uA) = 222.2 kohm
        REQUIRE(s.ro == Approx(222222.2).epsilon(1e-4));
        REQUIRE(s.gm == Approx(1e-3 * 0.3 * 1.05));
    }
    SECTION("cutoff reports zero gm and infinite ro") {
        const auto s = small_signal_at(test_deck(0.1), {0.1, 0.5, 0.0});
        REQUIRE(s.reg == region::cutoff);
        REQUIRE(s.gm == 0.0);
        REQUIRE(std::isinf(s.ro));
    }
    SECTION("triode gm is kp*vds") {
        const auto s = small_signal_at(test_deck(0.0), {0.9, 0.1, 0.0});
        REQUIRE(s.reg == region::triode);
        REQUIRE(s.gm == Approx(1e-3 * 0.1));
    }
}

TEST_CASE("current continuity across region boundaries", "[device][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> vth(0.2, 0.6);
    std::uniform_real_distribution<double> kp(1e-4, 5e-3);
    std::uniform_real_distribution<double> lam(0.0, 0.2);
    std::uniform_real_distribution<double> vgs(0.5, 1.5);

    for (int i = 0; i < 50; ++i) {
        mosfet_params p;
        p.vth = vth(rng);
        p.kp = kp(rng);
        p.lambda = lam(rng);
        const double g = vgs(rng);
        const double vov = g - p.vth;
        if (vov <= 0) continue;

        // exact value match of the two branches at the boundary
        const double tri = p.kp * (vov * vov - 0.5 * vov * vov) * (1.0 + p.lambda * vov);
        const double sat = 0.5 * p.kp * vov * vov * (1.0 + p.lambda * vov);
        REQUIRE(tri == Approx(sat).epsilon(1e-14));

        // epsilon straddle shrinks with epsilon (no jump term)
        const double eps = 1e-9;
        const double below = drain_current(p, {g, vov - eps, 0.0});
        const double above = drain_current(p, {g, vov + eps, 0.0});
        REQUIRE(std::abs(above - below) <= 1e-10 * p.kp + 4.0 * eps * p.kp);
    }
}

TEST_CASE("continuity at threshold with leakage enabled", "[device]") {
    mosfet_params p = test_deck(0.05);
    p.subthreshold_i0 = 1e-9;
    const double eps = 1e-9;
    const double below = drain_current(p, {p.vth - eps, 0.5, 0.0}, true);
    const double above = drain_current(p, {p.vth + eps, 0.5, 0.0}, true);
    REQUIRE(std::abs(above - below) <= 1e-12 + 1e-6 * std::abs(above));
}

TEST_CASE("monotonicity in the gate and drain voltages", "[device][property]") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lam(0.0, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        mosfet_params p = test_deck(lam(rng));
        p.subthreshold_i0 = 1e-9;
        const bool leak = trial % 2 == 0;
        for (double vds : {0.0, 0.05, 0.3, 0.9}) {
            double prev = -1.0;
            for (double vgs = 0.0; vgs <= 1.2; vgs += 0.01) {
                const double i = drain_current(p, {vgs, vds, 0.0}, leak);
                REQUIRE(i >= prev - 1e-18);
                prev = i;
            }
        }
        for (double vgs : {0.2, 0.5, 0.8, 1.2}) {
            double prev = -1.0;
            for (double vds = 0.0; vds <= 1.5; vds += 0.01) {
                const double i = drain_current(p, {vgs, vds, 0.0}, leak);
                REQUIRE(i >= prev - 1e-18);
                prev = i;
            }
        }
    }
}

TEST_CASE("polarity symmetry through normalization", "[device]") {
    mosfet_params n = test_deck(0.08);
    mosfet_params pm = n;
    pm.pol = polarity::pmos;

    // N device: vg=0.7, vd=0.5, vs=0; P device mirrored around the source
    const auto op_n = normalized_op(polarity::nmos, 0.7, 0.5, 0.0);
    const auto op_p = normalized_op(polarity::pmos, -0.7, -0.5, 0.0);
    REQUIRE(op_n.vgs == Approx(op_p.vgs));
    REQUIRE(op_n.vds == Approx(op_p.vds));
    REQUIRE(drain_current(n, op_n) == Approx(drain_current(pm, op_p)));
}

TEST_CASE("gm matches the finite difference of the current", "[device][property]") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> lam(0.0, 0.2);
    std::uniform_real_distribution<double> vgs(0.6, 1.2);
    const double h = 1e-6;
    for (int i = 0; i < 20; ++i) {
        const auto p = test_deck(lam(rng));
        const double g = vgs(rng);
        const double vds = g;  // deep saturation
        const auto s = small_signal_at(p, {g, vds, 0.0});
        const double fd = (drain_current(p, {g + h, vds, 0.0}) -
                           drain_current(p, {g - h, vds, 0.0})) /
                          (2.0 * h);
        REQUIRE(s.gm == Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("subthreshold leakage", "[device]") {
    SECTION("worked example: 100 mV below threshold") {
        mosfet_params p = test_deck();
        p.subthreshold_i0 = 1e-9;
        p.subthreshold_n = 1.5;
        // i0 * exp(-0.1 / (1.5 * 25.85 mV)) = 75.9 pA at large vds
        const double i = drain_current(p, {0.3, 1.0, 0.0}, true);
        REQUIRE(i == Approx(75.86e-12).epsilon(2e-2));
    }
    SECTION("no drain bias, no leakage current") {
        mosfet_params p = test_deck();
        p.subthreshold_i0 = 1e-9;
        REQUIRE(drain_current(p, {0.3, 0.0, 0.0}, true) == 0.0);
    }
    SECTION("thermal voltage scales with absolute temperature") {
        REQUIRE(thermal_voltage(27.0) == Approx(0.02585));
        REQUIRE(thermal_voltage(85.0) == Approx(0.02585 * (85 + 273.15) / 300.15));
        // hotter means more leakage
        mosfet_params p = test_deck();
        p.subthreshold_i0 = 1e-9;
        const double cold = drain_current(p, {0.3, 1.0, 0.0}, true, -40.0);
        const double hot = drain_current(p, {0.3, 1.0, 0.0}, true, 85.0);
        REQUIRE(hot > cold);
    }
}

TEST_CASE("analytic derivatives match finite differences", "[device][property]") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> vgs(0.0, 1.3);
    std::uniform_real_distribution<double> vds(0.01, 1.5);
    mosfet_params p = test_deck(0.1);
    p.subthreshold_i0 = 1e-9;
    const double h = 1e-7;
    for (int i = 0; i < 200; ++i) {
        const double g = vgs(rng), d = vds(rng);
        // skip points within h of a region boundary
        if (std::abs(g - p.vth) < 2 * h || std::abs(d - (g - p.vth)) < 2 * h) continue;
        const auto e = drain_current_with_derivatives(p, {g, d, 0.0}, true);
        const double fgm = (drain_current(p, {g + h, d, 0.0}, true) -
                            drain_current(p, {g - h, d, 0.0}, true)) /
                           (2 * h);
        const double fgd = (drain_current(p, {g, d + h, 0.0}, true) -
                            drain_current(p, {g, d - h, 0.0}, true)) /
                           (2 * h);
        REQUIRE(e.gm == Approx(fgm).margin(1e-9).epsilon(1e-4));
        REQUIRE(e.gds == Approx(fgd).margin(1e-9).epsilon(1e-4));
    }
}

TEST_CASE("deck validation", "[device]") {
    mosfet_params p = test_deck();
    REQUIRE_NOTHROW(p.validate());
    p.vth = -0.1;
    REQUIRE_THROWS_AS(p.validate(), error);
    p = test_deck();
    p.subthreshold_n = 0.5;
    REQUIRE_THROWS_AS(p.validate(), error);
}
