#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "itres/oracles.hpp"
#include "itres/pairing.hpp"
#include "itres/residue.hpp"

using namespace itres;

namespace {

PairingSpec make(std::size_t n, long d, unsigned g) {
    PairingSpec s;
    s.n = n;
    s.d = d;
    s.g = g;
    return s;
}

} // namespace

TEST_CASE("rank-2 volumes match the Bernoulli closed form") {
    for (unsigned g = 2; g <= 5; ++g) {
        PairingSpec s = make(2, 1, g);
        CHECK(pairing_a(s).value == svol_value(g));
    }
    CHECK(svol_value(2) == Rational(1, 12));
    CHECK(svol_value(3) == Rational(7, 1440));
}

TEST_CASE("one a_2 power against the closed forms") {
    PairingSpec s = make(2, 1, 2);
    s.a_exp[2] = 1;
    CHECK(pairing_a(s).value == Rational(1, 2)); // regularized eta(0) case

    PairingSpec t = make(2, 1, 3);
    t.a_exp[2] = 1;
    CHECK(pairing_a(t).value == thaddeus_value(3, 1).value);
    CHECK(pairing_a(t).value == Rational(1, 24));
}

TEST_CASE("mainab integrand structure for rank 2") {
    PairingSpec s = make(2, 1, 2);
    // (-1/2) * 4 * e^{Y/2} / (Y^2 (e^Y - 1))
    CHECK(integrand_mainab(s).dump() ==
          "exp((1/2)*Y1) * [(-2)] / [(1)*Y1]^2 / (exp((1)*Y1)-1)^1\n");
    s.a_exp[2] = 1;
    // extra factor tau_2(-X) = -Y^2/4: numerator -2 * (-1/4) Y^2, then the
    // pure Y-power cancels against the denominator
    CHECK(integrand_mainab(s).dump() ==
          "exp((1/2)*Y1) * [(1/2)] / (exp((1)*Y1)-1)^1\n");
}

TEST_CASE("mainab integrand for n=3 merges the two identical Weyl terms") {
    PairingSpec s = make(3, 1, 2);
    ExprQ e = integrand_mainab(s);
    REQUIRE(e.term_count() == 1); // [[w c~]] = c~ for all w, so terms merge
    const auto& t = e.terms()[0];
    CHECK(t.expc == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});
    // weight 2 from the Weyl sum times prefactor (-1/6) * 9
    CHECK(t.rat.num().constant_value() == Rational(-3));
    CHECK(e.dump() ==
          "exp((1/3)*Y1 + (2/3)*Y2) * [(-3)] / [(1)*Y2]^2 / [(1)*Y1]^2 / "
          "[(1)*Y2 + (1)*Y1]^2 / (exp((1)*Y1)-1)^1 / (exp((1)*Y2)-1)^1\n");
}

TEST_CASE("the two denominator variants of the residue formula agree") {
    for (std::size_t n : {2, 3}) {
        for (unsigned g : {2u, 3u}) {
            PairingSpec s = make(n, 1, g);
            s.a_exp[2] = 1;
            CHECK(iterated_residue(integrand_mainab(s)) ==
                  iterated_residue(integrand_remark_a(s)));
        }
    }
}

TEST_CASE("rank-3 values, frozen and cross-checked") {
    PairingSpec s = make(3, 1, 2);
    CHECK(pairing_a(s).value == Rational::from_string("53/1632960"));
    s.a_exp[2] = 1;
    CHECK(pairing_a(s).value == Rational::from_string("7/6480"));
    // the pairing depends on d only through d mod n
    PairingSpec t = make(3, 2, 2);
    CHECK(pairing_a(t).value == Rational::from_string("53/1632960"));
    PairingSpec u = make(3, 5, 2);
    CHECK(pairing_a(u).value == pairing_a(t).value);
}

TEST_CASE("route agreement: the jet route reduces to the a-route") {
    // grid n <= 3, g <= 3, sum r m_r <= 8
    for (std::size_t n : {2, 3}) {
        for (unsigned g : {2u, 3u}) {
            for (unsigned m2 = 0; 2 * m2 <= 8; ++m2) {
                unsigned m3max = (n == 3) ? (8 - 2 * m2) / 3 : 0;
                for (unsigned m3 = 0; m3 <= m3max; ++m3) {
                    PairingSpec s = make(n, 1, g);
                    if (m2) s.a_exp[2] = m2;
                    if (m3) s.a_exp[3] = m3;
                    CAPTURE(n);
                    CAPTURE(g);
                    CAPTURE(m2);
                    CAPTURE(m3);
                    CHECK(pairing_a(s).value == pairing_f(s).value);
                }
            }
        }
    }
    // frozen sample from the deep end of the grid
    PairingSpec s = make(3, 1, 3);
    s.a_exp[2] = 1;
    CHECK(pairing_a(s).value == Rational::from_string("17879/1047576499200"));
}

TEST_CASE("f-class pairings through delta jets") {
    // single f_3 insertion vanishes at genus 2 (the delta_3-linear part of
    // the determinant expansion is a linear invariant, hence zero)
    PairingSpec s = make(3, 1, 2);
    s.f_exp[3] = 1;
    CHECK(pairing_f(s).value == Rational(0));
    PairingSpec s2 = make(3, 2, 2);
    s2.f_exp[3] = 1;
    CHECK(pairing_f(s2).value == Rational(0));

    // frozen nontrivial values, validated against the substitution route
    PairingSpec t = make(3, 1, 2);
    t.f_exp[3] = 2;
    CHECK(pairing_f(t).value == Rational(7, 972));
    PairingSpec u = make(3, 1, 2);
    u.a_exp[2] = 1;
    u.f_exp[3] = 2;
    CHECK(pairing_f(u).value == Rational(5, 54));

    // f_3 does not exist for rank 2
    PairingSpec bad = make(2, 1, 2);
    bad.f_exp[3] = 1;
    CHECK_THROWS_AS(pairing_f(bad), std::invalid_argument);
}

TEST_CASE("t_rs insertion polynomials") {
    auto q2 = QPolynomial::standard(2, {});
    RatFuncJ t22 = t_rs(2, 2, 2, q2);
    PolyJ want2(1);
    want2.add_term({2}, ScalarTraits<Jet>::from_rational(Rational(1, 2)));
    CHECK(t22.num() == want2);
    CHECK(t22.den().empty());

    auto q3 = QPolynomial::standard(3, {0});
    RatFuncJ t33 = t_rs(3, 2, 2, q3);
    PolyJ want3(2);
    for (Mono m : {Mono{2, 0}, Mono{1, 1}, Mono{0, 2}})
        want3.add_term(m, ScalarTraits<Jet>::from_rational(Rational(2, 3)));
    CHECK(t33.num() == want3);

    // basis-free gradient pairing: T_{rs}(-X) at q = tau_2 equals the
    // Gram-inverse contraction of the two tau gradients
    RootSystem rs(3);
    PolyQ d2[2], d3[2];
    for (std::size_t a = 0; a < 2; ++a) {
        PolyQ acc2(2), acc3(2);
        for (std::size_t t = 0; t < 2; ++t) {
            PolyQ p2 = tau_poly(3, 2).partial(t);
            p2.mul_rational(rs.gram()[a][t]);
            acc2 += p2;
            PolyQ p3 = tau_poly(3, 3).partial(t);
            p3.mul_rational(rs.gram()[a][t]);
            acc3 += p3;
        }
        d2[a] = acc2;
        d3[a] = acc3;
    }
    PolyQ direct(2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            PolyQ t = d2[a] * d3[b];
            t.mul_rational(rs.gram_inverse()[a][b]);
            direct += t;
        }
    CHECK(promote<Jet>(direct) == t_rs(3, 2, 3, q3).num());

    CHECK_THROWS_AS(t_rs(3, 1, 2, q3), std::invalid_argument);
    CHECK_THROWS_AS(t_rs(3, 2, 4, q3), std::invalid_argument);
}

TEST_CASE("b-class pairings: vanishing patterns") {
    // single unpaired index
    PairingSpec s = make(2, 1, 2);
    s.b_idx = {{2, 1}};
    CHECK(pairing_b(s).value == Rational(0));
    // same handle twice on the j side
    PairingSpec t = make(2, 1, 3);
    t.b_idx = {{2, 1}, {2, 2}};
    CHECK(pairing_b(t).value == Rational(0));
    // repeated generator squares to zero
    PairingSpec u = make(2, 1, 3);
    u.b_idx = {{2, 1}, {2, 1}, {2, 4}, {2, 4}};
    CHECK(pairing_b(u).value == Rational(0));
    // mismatched counts across (j, j+g)
    PairingSpec v = make(3, 1, 2);
    v.b_idx = {{2, 1}, {3, 1}, {2, 3}};
    CHECK(pairing_b(v).value == Rational(0));
}

TEST_CASE("b-class genus reduction fixes the global sign") {
    PairingSpec s = make(2, 1, 3);
    s.a_exp[2] = 1;
    s.b_idx = {{2, 1}, {2, 4}};
    PairingResult res = pairing_b(s);
    PairingSpec low = make(2, 1, 2);
    low.a_exp[2] = 1;
    CHECK(res.value == pairing_a(low).value);
    CHECK(res.value == Rational(1, 2));
    CHECK(res.b_sign == b_sector_sign());
}

TEST_CASE("b-class frozen values") {
    // q = g-1 cases: our normalization yields 1 where the classical rank-2
    // table quotes 4; the offset is a constant factor and is recorded, not
    // resolved (the genus-reduction cases pin the convention)
    PairingSpec s = make(2, 1, 2);
    s.b_idx = {{2, 1}, {2, 3}};
    CHECK(pairing_b(s).value == Rational(1));
    PairingSpec t = make(2, 1, 3);
    t.b_idx = {{2, 1}, {2, 4}, {2, 2}, {2, 5}};
    CHECK(pairing_b(t).value == Rational(1));
    // two pairs at genus 2 overshoot the dimension
    PairingSpec u = make(2, 1, 2);
    u.b_idx = {{2, 1}, {2, 3}, {2, 2}, {2, 4}};
    CHECK(pairing_b(u).value == Rational(0));
    // rank-3 mixed insertion
    PairingSpec v = make(3, 1, 2);
    v.b_idx = {{2, 1}, {3, 3}};
    CHECK(pairing_b(v).value == Rational(-1, 648));
}

TEST_CASE("binverse identity on the grid") {
    for (std::size_t n : {2, 3}) {
        for (unsigned g : {2u, 3u}) {
            for (unsigned cap = 0; cap <= 2; ++cap) {
                if (n == 2 && cap > 0) continue; // no delta variables at rank 2
                std::vector<unsigned> caps(n - 2, cap);
                for (auto a_exp : std::vector<std::map<std::size_t, unsigned>>{
                         {}, {{2, 1}}}) {
                    CAPTURE(n);
                    CAPTURE(g);
                    CAPTURE(cap);
                    auto rep = binverse_identity_check(n, 1, g, a_exp, caps);
                    CHECK(rep.equal);
                }
            }
        }
    }
}

TEST_CASE("binverse report carries the exact jets") {
    auto rep = binverse_identity_check(3, 1, 2, {}, {1});
    REQUIRE(rep.equal);
    CHECK(rep.lhs.coeff({0}) == Rational::from_string("53/1632960"));
    CHECK(rep.lhs.coeff({1}) == Rational(0));

    // rank 2 has no nilpotent directions; both sides are the plain pairing
    auto rep2 = binverse_identity_check(2, 1, 2, {{2, 1}}, {});
    REQUIRE(rep2.equal);
    CHECK(rep2.lhs.coeff({}) == Rational(1, 2));
}

TEST_CASE("epsilon scaling") {
    // value(eps) = eps * (a_2 f_2)[M] for the one-below-top class
    PairingSpec s = make(2, 1, 2);
    s.a_exp[2] = 1;
    CHECK(epsilon_scaled_pairing(s, Rational(1)).value == Rational(1, 2));
    CHECK(epsilon_scaled_pairing(s, Rational(2)).value == Rational(1));
    CHECK(epsilon_scaled_pairing(s, Rational(5)).value == Rational(5, 2));

    // top-degree classes are epsilon independent (these two vanish, which an
    // independent symbolic computation confirms; the three evaluations must
    // still coincide exactly)
    for (auto [m2, m3] : std::vector<std::pair<unsigned, unsigned>>{{4, 0}, {1, 2}}) {
        PairingSpec t = make(3, 1, 2);
        if (m2) t.a_exp[2] = m2;
        if (m3) t.a_exp[3] = m3;
        Rational v1 = epsilon_scaled_pairing(t, Rational(1)).value;
        Rational v2 = epsilon_scaled_pairing(t, Rational(2)).value;
        Rational v3 = epsilon_scaled_pairing(t, Rational(1, 3)).value;
        CHECK(v1 == v2);
        CHECK(v2 == v3);
        CHECK(v1 == pairing_a(t).value);
    }

    // degree above the dimension: zero for every eps
    PairingSpec z = make(2, 1, 2);
    z.a_exp[2] = 3;
    for (long e : {1L, 2L, 7L})
        CHECK(epsilon_scaled_pairing(z, Rational(e)).value == Rational(0));
    CHECK_THROWS_AS(epsilon_scaled_pairing(z, Rational(0)), std::invalid_argument);
}

TEST_CASE("nilpotent-scale generating jet isolates f_2 powers") {
    PairingSpec s = make(2, 1, 2);
    s.a_exp[2] = 1;
    Jet j = pairing_a_eps_jet(s, 2);
    CHECK(j.coeff({0}) == Rational(0));
    CHECK(j.coeff({1}) == Rational(1, 2)); // a_2 f_2 [M]
    CHECK(j.coeff({2}) == Rational(0));

    // degree above the dimension at jet order 0
    PairingSpec z = make(2, 1, 2);
    z.a_exp[2] = 3;
    Jet jz = pairing_a_eps_jet(z, 0);
    CHECK(jz.is_zero());
}

TEST_CASE("spec validation errors") {
    PairingSpec s = make(2, 2, 2); // gcd != 1
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    PairingSpec t = make(2, 1, 1); // genus too small
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    PairingSpec u = make(2, 1, 2);
    u.a_exp[5] = 1; // index out of range
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    PairingSpec v = make(2, 1, 2);
    v.b_idx = {{2, 5}}; // cycle index above 2g
    CHECK_THROWS_AS(v.validate(), std::invalid_argument);
}

TEST_CASE("dispatch honors explicit routes") {
    PairingSpec s = make(2, 1, 2);
    s.a_exp[2] = 1;
    CHECK(pairing_dispatch(s, Route::mainab).value == Rational(1, 2));
    CHECK(pairing_dispatch(s, Route::t96b).value == Rational(1, 2));
    CHECK(pairing_dispatch(s, Route::eq936).value == Rational(1, 2));
    CHECK(pairing_dispatch(s, std::nullopt).route == Route::mainab);
    PairingSpec b = make(2, 1, 3);
    b.b_idx = {{2, 1}, {2, 4}};
    CHECK(pairing_dispatch(b, std::nullopt).route == Route::eq936);
    CHECK_THROWS_AS(pairing_dispatch(b, Route::mainab), std::invalid_argument);
}
