#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "itres/bernoulli.hpp"
#include "itres/oracles.hpp"
#include "itres/pairing.hpp"

#include <cmath>

using namespace itres;

TEST_CASE("thaddeus closed forms") {
    CHECK(thaddeus_value(2, 0).value == Rational(1, 12));
    CHECK(thaddeus_value(3, 0).value == Rational(7, 1440));
    CHECK(thaddeus_value(3, 1).value == Rational(1, 24));
    CHECK(thaddeus_value(4, 2).value == Rational(1, 48));
    CHECK_FALSE(thaddeus_value(3, 1).regularized);

    auto reg = thaddeus_value(2, 1); // eta(0) = 1/2, Abel sum
    CHECK(reg.regularized);
    CHECK(reg.value == Rational(1, 2));

    CHECK_THROWS_AS(thaddeus_value(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(thaddeus_value(1, 0), std::invalid_argument);
}

TEST_CASE("symplectic volumes") {
    CHECK(svol_value(2) == Rational(1, 12));
    CHECK(svol_value(3) == Rational(7, 1440));
    CHECK(svol_value(4) == Rational::from_string("31/120960"));
    CHECK(svol_value(5) == Rational::from_string("127/9676800"));
    for (unsigned g = 2; g <= 5; ++g)
        CHECK(thaddeus_value(g, 0).value == svol_value(g));
}

TEST_CASE("witten sum reproduces the rank-2 volume") {
    LatticeSumConfig cfg;
    cfg.cutoff = 2000;
    auto rep = witten_sum(2, 1, 2, {}, cfg);
    CHECK(rep.converged);
    CHECK(std::fabs(rep.value - 1.0 / 12.0) < 1e-6);
    auto rep3 = witten_sum(2, 1, 3, {}, cfg);
    CHECK(std::fabs(rep3.value - 7.0 / 1440.0) < 1e-8);
}

TEST_CASE("witten sum at rank 3 matches the exact residue") {
    LatticeSumConfig cfg;
    cfg.cutoff = 200;
    auto rep = witten_sum(3, 1, 2, {}, cfg);
    PairingSpec s;
    s.n = 3;
    s.d = 1;
    s.g = 2;
    double exact = pairing_a(s).value.to_double();
    CHECK(std::fabs(rep.value - exact) < 1e-5 * std::fabs(exact));
}

TEST_CASE("witten sum rejects divergent requests") {
    LatticeSumConfig cfg;
    cfg.cutoff = 10;
    // n=2, g=2 with m_2 = 1: summand does not decay
    CHECK_THROWS_AS(witten_sum(2, 1, 2, {{2, 1}}, cfg), std::invalid_argument);
}

TEST_CASE("witten convergence window shrinks as the cutoff doubles") {
    double prev = 1e9;
    for (unsigned long n : {50ul, 100ul, 200ul}) {
        LatticeSumConfig cfg;
        cfg.cutoff = n;
        auto rep = witten_sum(2, 1, 3, {}, cfg);
        CHECK(rep.window < prev);
        prev = rep.window;
    }
}

TEST_CASE("szenes identity: exact right-hand sides") {
    // frozen via Bernoulli-polynomial closed forms for the left side:
    //   sum_{l != 0} e^{-2 pi i gamma l} / (2 pi i l)^{2m} = -B_{2m}(gamma)/(2m)!
    LatticeSumConfig cfg;
    cfg.cutoff = 300;
    auto r0 = szenes_check(0, cfg);
    CHECK(r0.rhs == Rational(1, 24));
    auto r1 = szenes_check(1, cfg);
    CHECK(r1.rhs == Rational(-7, 5760));
    auto r2 = szenes_check(2, cfg);
    CHECK(r2.rhs == Rational(1, 36));
    auto r3 = szenes_check(3, cfg);
    CHECK(r3.rhs == Rational::from_string("31/2449440"));
    for (const auto* r : {&r0, &r1, &r2, &r3}) CHECK(r->diff < 1e-5);
}

TEST_CASE("szenes truncation error decays through three doublings") {
    double prev = 1e9;
    for (unsigned long n : {50ul, 100ul, 200ul}) {
        LatticeSumConfig cfg;
        cfg.cutoff = n;
        auto rep = szenes_check(0, cfg);
        CHECK(rep.diff <= prev + 1e-15);
        prev = rep.diff;
    }
}

TEST_CASE("szenes test function table") {
    const auto& fns = szenes_functions();
    REQUIRE(fns.size() == 4);
    CHECK(fns[0].n == 2);
    CHECK(fns[3].n == 3);
    for (const auto& f : fns)
        for (const auto& gj : f.gamma) {
            CHECK(gj >= Rational(0));
            CHECK(gj < Rational(1));
        }
    LatticeSumConfig cfg;
    CHECK_THROWS_AS(szenes_check(99, cfg), std::invalid_argument);
}
