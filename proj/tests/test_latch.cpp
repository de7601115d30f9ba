#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "casdlab/latch.hpp"

using namespace casdlab;
using Catch::Approx;

TEST_CASE("substitution factors", "[latch]") {
    SECTION("equal devices: worked example") {
        small_signal s{1e-3, 1e5, region::saturation};
        const auto f = abc_from_small_signal(s, s, s);
        REQUIRE(f.a == Approx(100.0));
        REQUIRE(f.b == Approx(100.0));
        REQUIRE(f.c == Approx(100.0));
        REQUIRE(f.delta() == Approx(0.0));
        REQUIRE(f.r0 == Approx(300e3));
        REQUIRE(f.ro_p5 == Approx(1e5));
    }
    SECTION("zero gm gives zero factor") {
        small_signal z{0.0, 1e5, region::saturation};
        small_signal s{1e-3, 1e5, region::saturation};
        REQUIRE(abc_from_small_signal(z, s, s).a == 0.0);
    }
    SECTION("infinite ro rejected") {
        small_signal inf{1e-3, ro_infinite, region::saturation};
        small_signal s{1e-3, 1e5, region::saturation};
        REQUIRE_THROWS_AS(abc_from_small_signal(inf, s, s), error);
    }
}

TEST_CASE("equivalent resistance forms", "[latch]") {
    SECTION("delta = 0 reduces to +2 r0 / c") {
        small_signal s{1e-3, 1e5, region::saturation};
        const auto f = abc_from_small_signal(s, s, s);
        const auto r = r_eq_full(f);
        REQUIRE_FALSE(r.singular);
        REQUIRE(r.value == Approx(6e3));
        REQUIRE(r_eq_delta(0.0, f.c, f.r0, f.ro_p5).value == Approx(6e3));
    }

    SECTION("c -> 0 with positive delta gives a pure negative resistance") {
        const double r0 = 3e5, ro = 1e5, delta = 0.7;
        const auto r = r_eq_delta(delta, 0.0, r0, ro);
        REQUIRE(r.value == Approx(-2.0 * (r0 + ro * delta) / delta));
        REQUIRE(r.value < 0.0);
    }

    SECTION("denominator identity over random draws") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u(0.0, 1e3);
        for (int i = 0; i < 10000; ++i) {
            const double a = u(rng), b = u(rng), c = u(rng);
            const double expanded = a - c - b + c * b - a * c;
            const double factored = (1.0 - c) * (a - b) - c;
            const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(c * b) +
                                 std::abs(a * c) + 1.0;
            REQUIRE(std::abs(expanded - factored) <= 1e-12 * scale);
        }
    }

    SECTION("full and fractional-linear forms agree") {
        std::mt19937_64 rng(43);
        std::uniform_real_distribution<double> gm(1e-4, 5e-3);
        std::uniform_real_distribution<double> ro(1e4, 1e6);
        for (int i = 0; i < 10000; ++i) {
            abc_factors f;
            const double ro3 = ro(rng), ro5n = ro(rng), ro5p = ro(rng);
            f.a = gm(rng) * ro3;
            f.b = gm(rng) * ro5n;
            f.c = gm(rng) * ro5p;
            f.r0 = ro3 + ro5n + ro5p;
            f.ro_p5 = ro5p;
            const auto full = r_eq_full(f);
            const auto frac = r_eq_delta(f.delta(), f.c, f.r0, f.ro_p5);
            REQUIRE(full.singular == frac.singular);
            if (!full.singular) {
                const double scale = std::max(std::abs(full.value), std::abs(frac.value));
                REQUIRE(std::abs(full.value - frac.value) <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("critical sizing condition", "[latch]") {
    SECTION("closed form") {
        REQUIRE(critical_delta(0.5) == Approx(1.0));
        REQUIRE(critical_delta(0.0) == 0.0);
        REQUIRE_THROWS_AS(critical_delta(1.0), error);
    }

    SECTION("substituting the critical delta zeroes the denominator") {
        for (double c : {0.1, 0.3, 0.5, 0.9, 0.99}) {
            const double d = critical_delta(c);
            REQUIRE(std::abs((1.0 - c) * d - c) <= 1e-12 * std::max(1.0, c));
        }
    }

    SECTION("critical delta flags singular for any r0, ro_p5") {
        for (double c : {0.05, 0.25, 0.5, 0.75, 0.95}) {
            for (double r0 : {1e3, 3e5, 1e7}) {
                for (double ro : {1e3, 1e5, 1e6}) {
                    const auto r = r_eq_delta(critical_delta(c), c, r0, ro);
                    REQUIRE(r.singular);
                    REQUIRE(std::isinf(r.value));
                }
            }
        }
    }

    SECTION("sign flips across the pole") {
        const double c = 0.5, r0 = 3e5, ro = 1e5;
        const double dstar = critical_delta(c);
        const auto above = r_eq_delta(dstar + 1e-6, c, r0, ro);
        const auto below = r_eq_delta(dstar - 1e-6, c, r0, ro);
        REQUIRE_FALSE(above.singular);
        REQUIRE_FALSE(below.singular);
        REQUIRE(above.value < 0.0);
        REQUIRE(below.value > 0.0);
    }

    SECTION("strictly increasing on [0, 1)") {
        double prev = critical_delta(0.0);
        for (int i = 1; i < 100; ++i) {
            const double v = critical_delta(0.01 * i);
            REQUIRE(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("constructed singularity example", "[latch]") {
    // c = 0.5, a - b = 1 sits exactly on the pole
    abc_factors f;
    f.a = 1.5;
    f.b = 0.5;
    f.c = 0.5;
    f.r0 = 3e5;
    f.ro_p5 = 1e5;
    const auto r = r_eq_full(f);
    REQUIRE(r.singular);
}
