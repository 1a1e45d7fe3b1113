#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "itres/residue.hpp"

#include "joint_expansion.hpp"

#include <random>

using namespace itres;

namespace {

ExpTerm<Rational> make_term(std::size_t nv, std::vector<Rational> lambda, PolyQ num,
                            std::vector<std::pair<PolyQ, unsigned>> den = {},
                            std::vector<EulerFactor> euler = {}) {
    ExpTerm<Rational> t(nv);
    t.expc = std::move(lambda);
    RatFuncQ r(std::move(num));
    for (auto& [base, e] : den)
        for (unsigned i = 0; i < e; ++i) r.div_poly(base);
    t.rat = std::move(r);
    t.euler = std::move(euler);
    return t;
}

ExprQ single(ExpTerm<Rational> t) {
    ExprQ e(t.expc.size());
    e.add_term(std::move(t));
    return e;
}

std::mt19937 rng(987654);

} // namespace

TEST_CASE("expand 1/(e^Y - 1) to first order") {
    auto t = make_term(1, {Rational(0)}, PolyQ::constant(std::size_t{1}, Rational(1)), {},
                       {{0, Rational(1), 1}});
    auto ls = expand_in(t, 0, 1);
    CHECK(ls.lo == -1);
    REQUIRE(ls.coeff.size() == 3);
    CHECK(ls.at(-1) == RatFuncQ::constant(1, Rational(1)));
    CHECK(ls.at(0) == RatFuncQ::constant(1, Rational(-1, 2)));
    CHECK(ls.at(1) == RatFuncQ::constant(1, Rational(1, 12)));
}

TEST_CASE("expand 1/(Y1+Y2) in Y2: geometric series in the outer variable") {
    PolyQ y1 = PolyQ::variable(2, 0), y2 = PolyQ::variable(2, 1);
    auto t = make_term(2, {Rational(0), Rational(0)},
                       PolyQ::constant(std::size_t{2}, Rational(1)), {{y1 + y2, 1}});
    auto ls = expand_in(t, 1, 2);
    CHECK(ls.lo == 0);
    RatFuncQ c0 = RatFuncQ::constant(2, Rational(1));
    c0.div_poly(y1);
    CHECK(ls.at(0) == c0);
    RatFuncQ c1 = RatFuncQ::constant(2, Rational(-1));
    c1.div_poly(y1);
    c1.div_poly(y1);
    CHECK(ls.at(1) == c1);
    RatFuncQ c2 = RatFuncQ::constant(2, Rational(1));
    for (int i = 0; i < 3; ++i) c2.div_poly(y1);
    CHECK(ls.at(2) == c2);
}

TEST_CASE("expand e^Y * Y^2 to order 3") {
    PolyQ y = PolyQ::variable(1, 0);
    auto t = make_term(1, {Rational(1)}, y * y);
    auto ls = expand_in(t, 0, 3);
    CHECK(ls.lo == 2);
    CHECK(ls.at(2) == RatFuncQ::constant(1, Rational(1)));
    CHECK(ls.at(3) == RatFuncQ::constant(1, Rational(1)));
    CHECK(ls.at(1).is_zero());
}

TEST_CASE("single residues") {
    PolyQ one1 = PolyQ::constant(std::size_t{1}, Rational(1));
    PolyQ y = PolyQ::variable(1, 0);

    // 1/Y -> 1
    auto r1 = iterated_residue(single(make_term(1, {Rational(0)}, one1, {{y, 1}})));
    CHECK(r1 == Rational(1));

    // entire function -> 0
    auto r2 = iterated_residue(single(make_term(1, {Rational(1)}, one1)));
    CHECK(r2 == Rational(0));

    // e^X/(X^2 (1-e^{2X})) -> 1/12   (1-e^{2X} = -(e^{2X}-1))
    auto t = make_term(1, {Rational(1)}, -one1, {{y, 2}}, {{0, Rational(2), 1}});
    CHECK(iterated_residue(single(std::move(t))) == Rational(1, 12));
}

TEST_CASE("iterated residues") {
    PolyQ one2 = PolyQ::constant(std::size_t{2}, Rational(1));
    PolyQ y1 = PolyQ::variable(2, 0), y2 = PolyQ::variable(2, 1);

    // e^{Y1}/(Y1^2 Y2) -> 1
    auto a = make_term(2, {Rational(1), Rational(0)}, one2, {{y1, 2}, {y2, 1}});
    CHECK(iterated_residue(single(std::move(a))) == Rational(1));

    // 1/(Y1 Y2 (Y1+Y2)) -> 0
    auto b = make_term(2, {Rational(0), Rational(0)}, one2,
                       {{y1, 1}, {y2, 1}, {y1 + y2, 1}});
    CHECK(iterated_residue(single(std::move(b))) == Rational(0));

    // 1/Y1 in one live variable
    PolyQ one1 = PolyQ::constant(std::size_t{1}, Rational(1));
    auto c = make_term(1, {Rational(0)}, one1, {{PolyQ::variable(1, 0), 1}});
    CHECK(iterated_residue(single(std::move(c))) == Rational(1));
}

TEST_CASE("res_plus keeps strictly positive exponential frequencies") {
    PolyQ one1 = PolyQ::constant(std::size_t{1}, Rational(1));
    PolyQ y = PolyQ::variable(1, 0);

    ExprQ e1(1);
    e1.add_term(make_term(1, {Rational(1)}, one1, {{y, 1}}));
    e1.add_term(make_term(1, {Rational(-1)}, one1, {{y, 1}}));
    CHECK(iterated_res_plus(e1) == Rational(1));

    ExprQ e2(1);
    e2.add_term(make_term(1, {Rational(0)}, one1, {{y, 1}}));
    CHECK(iterated_res_plus(e2) == Rational(0));

    ExprQ e3(1);
    e3.add_term(make_term(1, {Rational(2)}, one1, {{y, 1}}));
    e3.add_term(make_term(1, {Rational(1)}, one1.mul_rational(Rational(-3)), {{y, 1}}));
    CHECK(iterated_res_plus(e3) == Rational(-2));
}

namespace {

// random expression generator shared by the property tests
ExprQ random_expr(std::size_t nv, int nterms, std::mt19937& gen) {
    std::uniform_int_distribution<long> lam(-2, 2);
    std::uniform_int_distribution<int> pick(0, 2), ppow(1, 2), deg(0, 3), scpick(0, 3),
        nden(1, 4);
    const Rational scales[4] = {Rational(1), Rational(-1), Rational(2), Rational(1, 2)};
    ExprQ e(nv);
    for (int i = 0; i < nterms; ++i) {
        ExpTerm<Rational> t(nv);
        for (auto& l : t.expc) l = Rational(lam(gen));
        PolyQ num(nv);
        for (int k = 0; k < 2; ++k) {
            Mono m(nv);
            for (auto& x : m) x = static_cast<unsigned>(deg(gen));
            num.add_term(m, Rational(lam(gen)));
        }
        if (num.is_zero()) num = PolyQ::constant(nv, Rational(1));
        RatFuncQ r(num);
        // denominators drawn from root forms; repeats pile up into powers,
        // including the mixed form, which exercises the series inversion
        std::vector<PolyQ> forms;
        for (std::size_t j = 0; j < nv; ++j) forms.push_back(PolyQ::variable(nv, j));
        if (nv == 2) forms.push_back(PolyQ::variable(2, 0) + PolyQ::variable(2, 1));
        int nd = nden(gen);
        for (int k = 0; k < nd; ++k) {
            const PolyQ& b = forms[static_cast<std::size_t>(pick(gen)) % forms.size()];
            r.div_poly(b);
        }
        t.rat = std::move(r);
        if (pick(gen) == 0) {
            EulerFactor f{static_cast<std::size_t>(pick(gen)) % nv,
                          scales[scpick(gen)], static_cast<unsigned>(ppow(gen))};
            t.euler.push_back(f);
        }
        e.add_term(std::move(t));
    }
    return e;
}

} // namespace

TEST_CASE("linearity of the iterated residue (randomized)") {
    for (int it = 0; it < 25; ++it) {
        std::size_t nv = it % 2 == 0 ? 1 : 2;
        ExprQ f = random_expr(nv, 2, rng);
        ExprQ g = random_expr(nv, 2, rng);
        Rational a(3, 2), b(-2, 5);
        ExprQ combo(nv);
        ExprQ fs = f;
        fs.mul_rational(a);
        ExprQ gs = g;
        gs.mul_rational(b);
        combo.add(fs);
        combo.add(gs);
        CHECK(iterated_residue(combo) ==
              a * iterated_residue(f) + b * iterated_residue(g));
    }
}

namespace {

// d/dvar of a single term, as an expression (product rule; the euler factor
// derivative uses e^{cv} = (e^{cv}-1) + 1).
ExprQ derivative_term(const ExpTerm<Rational>& t, std::size_t var) {
    ExprQ out(t.expc.size());
    // exponential part
    if (!t.expc[var].is_zero()) {
        ExpTerm<Rational> a = t;
        a.rat.mul_rational(t.expc[var]);
        out.add_term(std::move(a));
    }
    // rational part: d(num)/den - num * sum exp_i d(base_i)/ (den * base_i)
    {
        ExpTerm<Rational> a = t;
        a.rat = RatFuncQ(t.rat.num().partial(var), t.rat.den());
        out.add_term(std::move(a));
        for (std::size_t i = 0; i < t.rat.den().size(); ++i) {
            const auto& f = t.rat.den()[i];
            PolyQ db = f.base.partial(var);
            if (db.is_zero()) continue;
            ExpTerm<Rational> b = t;
            auto den = t.rat.den();
            den[i].exp += 1;
            RatFuncQ rb(t.rat.num() * db, den);
            rb.mul_rational(Rational(-static_cast<long>(f.exp), 1));
            b.rat = std::move(rb);
            out.add_term(std::move(b));
        }
    }
    // euler factors
    for (std::size_t i = 0; i < t.euler.size(); ++i) {
        const auto& f = t.euler[i];
        if (f.var != var) continue;
        Rational pref = -f.scale * Rational(static_cast<long>(f.power), 1);
        ExpTerm<Rational> a = t;
        a.rat.mul_rational(pref);
        out.add_term(a);
        ExpTerm<Rational> b = t;
        b.euler[i].power += 1;
        b.rat.mul_rational(pref);
        out.add_term(std::move(b));
    }
    return out;
}

} // namespace

TEST_CASE("residue of an exact derivative vanishes (randomized)") {
    for (int it = 0; it < 30; ++it) {
        ExprQ f = random_expr(1, 1, rng);
        if (f.is_zero()) continue;
        ExprQ df(1);
        for (const auto& t : f.terms()) df.add(derivative_term(t, 0));
        CHECK(iterated_residue(df) == Rational(0));
    }
}

TEST_CASE("expansion order beyond the pole bound never changes coefficients") {
    for (int it = 0; it < 20; ++it) {
        ExprQ f = random_expr(2, 1, rng);
        if (f.is_zero()) continue;
        const auto& t = f.terms()[0];
        auto lsA = expand_in(t, 1, 2);
        auto lsB = expand_in(t, 1, 6);
        for (int e = lsA.lo; e <= 2; ++e) CHECK(equal_values(lsA.at(e), lsB.at(e)));
    }
}

TEST_CASE("iterated residue agrees with the joint-expansion oracle (50 random)") {
    std::mt19937 gen(20250101);
    int done = 0;
    while (done < 50) {
        std::size_t nv = done % 2 == 0 ? 2 : 1;
        ExprQ f = random_expr(nv, 2, gen);
        int budget = 0, numdeg = 0;
        for (const auto& t : f.terms()) {
            for (const auto& d : t.rat.den())
                budget += static_cast<int>(d.exp * d.base.total_degree());
            for (const auto& eu : t.euler) budget += static_cast<int>(eu.power);
            numdeg = std::max(numdeg, static_cast<int>(t.rat.num().total_degree()));
        }
        if (budget > 6) continue; // keep the oracle window small
        Rational engine = iterated_residue(f);
        Rational oracle = testing::joint_iterated_residue(f, budget + numdeg + 8);
        CHECK(engine == oracle);
        ++done;
    }
}

TEST_CASE("deep-pole regression: high powers of the mixed root form") {
    // frozen from an independent symbolic computation of
    //   exp(4/3 Y1 + 8/3 Y2) Y1^12 / (Y1^4 Y2^4 (Y1+Y2)^4 (e^{4Y1}-1)(e^{4Y2}-1))
    PolyQ y1 = PolyQ::variable(2, 0), y2 = PolyQ::variable(2, 1);
    ExpTerm<Rational> t(2);
    t.expc = {Rational(4, 3), Rational(8, 3)};
    PolyQ num(2);
    num.add_term({12, 0}, Rational(1));
    t.rat = RatFuncQ(num, {{y1, 4}, {y2, 4}, {y1 + y2, 4}});
    t.euler.push_back({0, Rational(4), 1});
    t.euler.push_back({1, Rational(4), 1});
    ExprQ e(2);
    e.add_term(t);
    CHECK(iterated_residue(e) == Rational(35, 16));

    // degree 13 and 14 overshoot the pole budget and must vanish
    for (Mono m : {Mono{13, 1}, Mono{14, 0}, Mono{7, 7}}) {
        ExprQ e2(2);
        ExpTerm<Rational> t2 = e.terms()[0];
        PolyQ num2(2);
        num2.add_term(m, Rational(1));
        t2.rat = RatFuncQ(num2, {{y1, 4}, {y2, 4}, {y1 + y2, 4}});
        e2.add_term(t2);
        CHECK(iterated_residue(e2) == Rational(0));
    }
}

TEST_CASE("expression dump is deterministic under insertion order") {
    PolyQ y1 = PolyQ::variable(2, 0), y2 = PolyQ::variable(2, 1);
    auto t1 = make_term(2, {Rational(1), Rational(0)},
                        PolyQ::constant(std::size_t{2}, Rational(2)), {{y1, 1}});
    auto t2 = make_term(2, {Rational(0), Rational(1)},
                        PolyQ::constant(std::size_t{2}, Rational(3)), {{y2, 2}});
    ExprQ a(2), b(2);
    a.add_term(t1);
    a.add_term(t2);
    b.add_term(t2);
    b.add_term(t1);
    CHECK(a.dump() == b.dump());
    CHECK(a.dump() != "");
}
