#include <catch2/catch_amalgamated.hpp>

#include "casdlab/mismatch.hpp"

using namespace casdlab;
using Catch::Approx;

TEST_CASE("ideal output power", "[mismatch]") {
    SECTION("0.9 V into 50 ohm") {
        // 8/pi^2 * 0.81 / 50 = 13.1312 mW
        REQUIRE(ideal_power(0.9, 50.0) == Approx(0.013131225).epsilon(1e-6));
    }
    SECTION("quadratic in vdd, inverse in r_opt") {
        REQUIRE(ideal_power(1.8, 50.0) == Approx(4.0 * ideal_power(0.9, 50.0)));
        REQUIRE(ideal_power(0.9, 100.0) == Approx(0.5 * ideal_power(0.9, 50.0)));
    }
    SECTION("matches the fundamental of the perfect square") {
        const auto sq = build_ideal_mismatch(0.9, 40e-12, 0.0);
        const double p = power_from_fundamental(fundamental_numeric(sq), 50.0);
        REQUIRE(p == Approx(ideal_power(0.9, 50.0)).epsilon(1e-4));
    }
    SECTION("invalid inputs rejected") {
        REQUIRE_THROWS_AS(ideal_power(0.0, 50.0), error);
        REQUIRE_THROWS_AS(ideal_power(0.9, -1.0), error);
    }
}

TEST_CASE("normalized mismatch ratio", "[mismatch]") {
    REQUIRE(delta_t(0.0, 1e-9) == 0.0);
    // t_c = 1/(2 * 12.4 GHz) = 40.3226 ps
    const double t_c = 1.0 / (2.0 * 12.4e9);
    REQUIRE(delta_t(4.03226e-12, t_c) == Approx(0.1).epsilon(1e-4));
    REQUIRE(delta_t(0.5e-9, 1e-9) == Approx(0.5));
    REQUIRE_THROWS_AS(delta_t(1e-9, 1e-9), error);
}

TEST_CASE("closed-form degradation bracket", "[mismatch]") {
    SECTION("identity at zero mismatch") {
        REQUIRE(mismatch_power_bracket(0.0) == 1.0);
        REQUIRE(mismatched_power_ideal(1e-3, 0.0) == Approx(1e-3));
    }
    SECTION("value at dt = 0.1") {
        // sin^2(0.4 pi) + 0.25 sin^2(0.05 pi) = 0.9106264
        REQUIRE(mismatch_power_bracket(0.1) == Approx(0.9106264327).epsilon(1e-9));
        REQUIRE(mismatched_power_ideal(2.0, 0.1) == Approx(2.0 * 0.9106264327).epsilon(1e-9));
    }
    SECTION("strictly decreasing over the working range") {
        // the bracket turns back up just before dt = 0.5 (minimum near 0.4801),
        // so strict decrease is asserted on (0, 0.48]
        double prev = mismatch_power_bracket(0.0);
        for (int i = 1; i <= 48; ++i) {
            const double v = mismatch_power_bracket(0.01 * i);
            REQUIRE(v < prev);
            prev = v;
        }
    }
    SECTION("bounded on [0, 0.5]") {
        for (int i = 0; i <= 50; ++i) {
            const double v = mismatch_power_bracket(0.01 * i);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    }
    SECTION("range checks") {
        REQUIRE_THROWS_AS(mismatch_power_bracket(-0.01), error);
        REQUIRE_THROWS_AS(mismatch_power_bracket(1.0), error);
    }
}

TEST_CASE("cascode output resistance", "[mismatch]") {
    SECTION("symmetric branches halve") {
        cascode_parasitics p;  // both branches identical by default
        const double branch = cascode_branch_rout(p.gm1n, p.ro1n, p.ro2n);
        REQUIRE(cascode_rout(p) == Approx(0.5 * branch));
    }
    SECTION("worked example: 1 mS, 10k, 10k") {
        cascode_parasitics p;
        REQUIRE(cascode_branch_rout(1e-3, 1e4, 1e4) == Approx(120e3));
        REQUIRE(cascode_rout(p) == Approx(60e3));
    }
    SECTION("gm ro term dominates for gm*ro1 >= 10") {
        const double r = cascode_branch_rout(1e-3, 1e4, 5e3);
        REQUIRE(1e-3 * 1e4 * 5e3 / r > 0.75);
        const double r2 = cascode_branch_rout(2e-3, 2e4, 2e4);
        REQUIRE(2e-3 * 2e4 * 2e4 / r2 > 0.9);
    }
    SECTION("branch exchange symmetry and parallel bound") {
        cascode_parasitics p;
        p.gm1n = 2e-3; p.ro1n = 5e3; p.ro2n = 2e4;
        p.gm1p = 0.5e-3; p.ro1p = 3e4; p.ro2p = 1e4;
        cascode_parasitics q = p;
        std::swap(q.gm1n, q.gm1p);
        std::swap(q.ro1n, q.ro1p);
        std::swap(q.ro2n, q.ro2p);
        REQUIRE(cascode_rout(p) == Approx(cascode_rout(q)));
        const double r_on = cascode_branch_rout(p.gm1n, p.ro1n, p.ro2n);
        const double r_op = cascode_branch_rout(p.gm1p, p.ro1p, p.ro2p);
        REQUIRE(cascode_rout(p) <= std::min(r_on, r_op));
    }
}

TEST_CASE("cascode output capacitance and time constant", "[mismatch]") {
    SECTION("worked example: 1 fF each, av = 10") {
        cascode_parasitics p;
        p.cgd_n = 1e-15; p.cgd_p = 1e-15; p.av = 10.0;
        REQUIRE(cascode_cout(p) == Approx(2.2e-15));
    }
    SECTION("av = 1 doubles each contribution") {
        cascode_parasitics p;
        p.cgd_n = 1e-15; p.cgd_p = 1e-15; p.av = 1.0;
        REQUIRE(cascode_cout(p) == Approx(4e-15));
    }
    SECTION("large intrinsic gain limit") {
        cascode_parasitics p;
        p.cgd_n = 1e-15; p.cgd_p = 1e-15; p.av = 1e12;
        REQUIRE(cascode_cout(p) == Approx(2e-15).epsilon(1e-9));
    }
    SECTION("tau is the product") {
        REQUIRE(time_constant(60e3, 2.2e-15) == Approx(132e-12));
        REQUIRE(time_constant(2 * 60e3, 2 * 2.2e-15) == Approx(4 * 132e-12));
        REQUIRE_THROWS_AS(time_constant(0.0, 1e-15), error);
    }
}

TEST_CASE("power from the fundamental", "[mismatch]") {
    REQUIRE(power_from_fundamental(harmonic{0.0, 0.0}, 50.0) == 0.0);
    const double m = 4.0 * 0.9 / periodic_waveform::pi();
    REQUIRE(power_from_fundamental(harmonic{m, 0.0}, 50.0) ==
            Approx(ideal_power(0.9, 50.0)).epsilon(1e-12));
    REQUIRE(power_from_fundamental(harmonic{2 * m, 0.0}, 50.0) ==
            Approx(4.0 * ideal_power(0.9, 50.0)).epsilon(1e-12));
    REQUIRE_THROWS_AS(power_from_fundamental(harmonic{1.0, 0.0}, 0.0), error);
}

TEST_CASE("degradation sweep", "[mismatch]") {
    mismatch_spec spec;  // 0.9 V, 12.4 GHz, 50 ohm
    const auto par = calibrated_parasitics(spec);  // tau = 0.05 * t_c

    SECTION("calibrated parasitics hit the target time constant") {
        const double tau = time_constant(cascode_rout(par), cascode_cout(par));
        REQUIRE(tau == Approx(0.05 * spec.t_c()).epsilon(1e-9));
    }

    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.02 * i);
    const auto table = degradation_sweep(spec, par, grid);

    SECTION("first row is exactly (1, 1)") {
        REQUIRE(table.rows.front().delta_t == 0.0);
        REQUIRE(table.rows.front().norm_ideal == 1.0);
        REQUIRE(table.rows.front().norm_nonideal == 1.0);
    }
    SECTION("closed-form column at dt = 0.1") {
        REQUIRE(table.rows[5].delta_t == Approx(0.1));
        REQUIRE(table.rows[5].norm_ideal == Approx(0.9106264327).epsilon(1e-9));
    }
    SECTION("RC column sits in the few-percent band at dt = 0.1") {
        REQUIRE(table.rows[5].norm_nonideal >= 0.955);
        REQUIRE(table.rows[5].norm_nonideal <= 0.985);
    }
    SECTION("both columns are non-increasing") {
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            REQUIRE(table.rows[i].norm_ideal <= table.rows[i - 1].norm_ideal + 1e-12);
            REQUIRE(table.rows[i].norm_nonideal <= table.rows[i - 1].norm_nonideal + 1e-12);
        }
    }
    SECTION("deterministic across runs") {
        const auto again = degradation_sweep(spec, par, grid);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            REQUIRE(table.rows[i].norm_ideal == again.rows[i].norm_ideal);
            REQUIRE(table.rows[i].norm_nonideal == again.rows[i].norm_nonideal);
        }
    }
    SECTION("grid validation") {
        REQUIRE_THROWS_AS(degradation_sweep(spec, par, {}), error);
        REQUIRE_THROWS_AS(degradation_sweep(spec, par, {0.1, 0.05}), error);
        REQUIRE_THROWS_AS(degradation_sweep(spec, par, {0.1, 0.3}), error);
    }
}
