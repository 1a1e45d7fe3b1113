#ifndef ITRES_RESIDUE_HPP
#define ITRES_RESIDUE_HPP

#include "itres/bernoulli.hpp"
#include "itres/expr.hpp"
#include "itres/parallel.hpp"

#include <stdexcept>

namespace itres {

// Truncated Laurent series in one variable; coefficients are rational
// functions of the remaining variables. Realizes the expansion at var = 0
// with the outer variables held constant (generic).
template <typename K>
struct LaurentSeries {
    std::size_t var = 0;
    int lo = 0;                    // exponent of coeff[0]
    std::vector<RatFunc<K>> coeff; // lo .. lo + coeff.size() - 1

    RatFunc<K> at(int e) const {
        if (e < lo || e >= lo + static_cast<int>(coeff.size()))
            return RatFunc<K>();
        return coeff[static_cast<std::size_t>(e - lo)];
    }
};

namespace detail {

// series in `len` coefficients starting at valuation `val`
template <typename K>
struct Ser {
    int val = 0;
    std::vector<RatFunc<K>> c;
};

template <typename K>
Ser<K> ser_mul(const Ser<K>& a, const Ser<K>& b, int hi) {
    Ser<K> r;
    r.val = a.val + b.val;
    int len = hi - r.val + 1;
    if (len <= 0) { r.c.clear(); return r; }
    r.c.assign(static_cast<std::size_t>(len), RatFunc<K>());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            if (i + j >= static_cast<std::size_t>(len)) break;
            if (b.c[j].is_zero()) continue;
            r.c[i + j] += a.c[i] * b.c[j];
        }
    }
    return r;
}

// Bernoulli generating series u/(e^u - 1) up to u^len-1.
inline std::vector<Rational> bernoulli_series(std::size_t len) {
    std::vector<Rational> s(len);
    for (std::size_t m = 0; m < len; ++m)
        s[m] = bernoulli(m) / Rational(factorial(m), BigInt(1));
    return s;
}

inline std::vector<Rational> rat_series_pow(const std::vector<Rational>& s, unsigned p,
                                            std::size_t len) {
    std::vector<Rational> r(len, Rational(0));
    r[0] = Rational(1);
    for (unsigned k = 0; k < p; ++k) {
        std::vector<Rational> t(len, Rational(0));
        for (std::size_t i = 0; i < len; ++i) {
            if (r[i].is_zero()) continue;
            for (std::size_t j = 0; i + j < len && j < s.size(); ++j)
                t[i + j] += r[i] * s[j];
        }
        r = std::move(t);
    }
    return r;
}

// Inverse of a power series of polynomials with nonzero constant coefficient
// s0 (a polynomial in the outer variables); coefficients become rational
// functions with denominator powers of s0.
template <typename K>
std::vector<RatFunc<K>> invert_poly_series(const std::vector<PolyQ>& s, std::size_t len) {
    std::vector<RatFunc<K>> c(len);
    RatFunc<K> s0inv = RatFunc<K>::constant(s[0].nvars(), Rational(1));
    s0inv.div_poly(s[0]);
    c[0] = s0inv;
    for (std::size_t t = 1; t < len; ++t) {
        RatFunc<K> acc;
        for (std::size_t i = 1; i <= t && i < s.size(); ++i) {
            if (s[i].is_zero()) continue;
            RatFunc<K> term = c[t - i];
            term.mul_poly(promote<K>(s[i]));
            acc += term;
        }
        acc = acc * s0inv;
        c[t] = -acc;
    }
    return c;
}

} // namespace detail

// Pole order of a term at var = 0 (outer variables generic); counts
// denominator multiplicity plus euler exponents, minus any pure var power in
// the numerator.
template <typename K>
int pole_order(const ExpTerm<K>& t, std::size_t var) {
    int p = 0;
    for (const auto& f : t.rat.den())
        p += static_cast<int>(f.base.min_exp_in(var) * f.exp);
    for (const auto& e : t.euler)
        if (e.var == var) p += static_cast<int>(e.power);
    p -= static_cast<int>(t.rat.num().min_exp_in(var));
    return p;
}

// Laurent expansion of one term in `var` through var^order (inclusive).
// The returned series absorbs every var-dependent factor; the var-free
// remainder (outer exponentials, other euler factors) is NOT included and
// stays with the caller's term shell.
template <typename K>
LaurentSeries<K> expand_in(const ExpTerm<K>& term, std::size_t var, int order) {
    const std::size_t nv = term.expc.size();
    using detail::Ser;

    int val = 0; // running valuation
    for (const auto& f : term.rat.den())
        val -= static_cast<int>(f.base.min_exp_in(var) * f.exp);
    for (const auto& e : term.euler)
        if (e.var == var) val -= static_cast<int>(e.power);
    if (order < val) {
        LaurentSeries<K> out;
        out.var = var;
        out.lo = order + 1;
        return out;
    }

    std::vector<Ser<K>> factors;

    // numerator
    {
        Ser<K> s;
        s.val = static_cast<int>(term.rat.num().min_exp_in(var));
        unsigned hi_deg = term.rat.num().degree_in(var);
        for (unsigned t = static_cast<unsigned>(s.val); t <= hi_deg; ++t)
            s.c.push_back(RatFunc<K>(term.rat.num().coeff_of(var, t)));
        factors.push_back(std::move(s));
    }

    // how many coefficients each remaining factor needs
    const int len = order - val + 1;

    // exponential in var
    if (!term.expc[var].is_zero()) {
        Ser<K> s;
        s.val = 0;
        Rational lp(1);
        for (int m = 0; m < len; ++m) {
            s.c.push_back(RatFunc<K>::constant(nv, lp));
            lp = lp * term.expc[var] / Rational(m + 1);
        }
        factors.push_back(std::move(s));
    }

    // euler factors in var: (e^{c v} - 1)^{-p} = (c v)^{-p} (v'/(e^{v'}-1))^p
    for (const auto& e : term.euler) {
        if (e.var != var) continue;
        auto bser = detail::rat_series_pow(detail::bernoulli_series(static_cast<std::size_t>(len)),
                                           e.power, static_cast<std::size_t>(len));
        Ser<K> s;
        s.val = -static_cast<int>(e.power);
        Rational scpow = e.scale.pow(-static_cast<long>(e.power));
        for (int m = 0; m < len; ++m) {
            s.c.push_back(RatFunc<K>::constant(nv, bser[static_cast<std::size_t>(m)] * scpow));
            scpow *= e.scale;
        }
        factors.push_back(std::move(s));
    }

    // denominator factors
    for (const auto& f : term.rat.den()) {
        unsigned k = f.base.min_exp_in(var);
        PolyQ unit = k ? f.base.shift_var_exp(var, -static_cast<int>(k)) : f.base;
        if (unit.degree_in(var) == 0) {
            // var-free once the pure power is stripped
            Ser<K> s;
            s.val = -static_cast<int>(k * f.exp);
            RatFunc<K> c = RatFunc<K>::constant(nv, Rational(1));
            for (unsigned i = 0; i < f.exp; ++i) c.div_poly(unit);
            s.c.push_back(std::move(c));
            factors.push_back(std::move(s));
            continue;
        }
        std::vector<PolyQ> us;
        unsigned hd = unit.degree_in(var);
        for (unsigned t = 0; t <= hd; ++t) us.push_back(unit.coeff_of(var, t));
        auto inv = detail::invert_poly_series<K>(us, static_cast<std::size_t>(len));
        Ser<K> base;
        base.val = 0;
        base.c = std::move(inv);
        Ser<K> s = base;
        for (unsigned i = 1; i < f.exp; ++i) s = detail::ser_mul(s, base, len - 1);
        s.val = -static_cast<int>(k * f.exp);
        factors.push_back(std::move(s));
    }

    // Multiply with a running upper bound: factors still to come may have
    // negative valuation, so partial products must keep orders above `order`
    // until those factors are folded in.
    int tail_val = 0;
    for (const auto& f : factors) tail_val += f.val;
    Ser<K> prod;
    prod.val = 0;
    prod.c = {RatFunc<K>::constant(nv, Rational(1))};
    for (std::size_t i = 0; i < factors.size(); ++i) {
        tail_val -= factors[i].val;
        prod = detail::ser_mul(prod, factors[i], order - tail_val);
    }

    LaurentSeries<K> out;
    out.var = var;
    out.lo = prod.val;
    out.coeff = std::move(prod.c);
    // drop leading zeros
    while (!out.coeff.empty() && out.coeff.front().is_zero()) {
        out.coeff.erase(out.coeff.begin());
        ++out.lo;
    }
    return out;
}

// Single residue in the innermost live variable. Terms without a pole in the
// variable vanish.
template <typename K>
Expression<K> residue_single(const Expression<K>& expr, std::size_t var) {
    if (expr.live() == 0 || var != expr.live() - 1)
        throw std::invalid_argument("residue_single: var must be the innermost live variable");

    auto work = [&](const ExpTerm<K>& t) -> Expression<K> {
        Expression<K> out(expr.nvars());
        if (pole_order(t, var) <= 0) return out;
        LaurentSeries<K> ls = expand_in(t, var, -1);
        RatFunc<K> res = ls.at(-1);
        if (res.is_zero()) return out;
        if (res.num().degree_in(var) != 0)
            throw std::logic_error("residue_single: residue still depends on the variable");
        ExpTerm<K> nt(expr.nvars());
        nt.expc = t.expc;
        nt.expc[var] = Rational(0);
        for (const auto& e : t.euler)
            if (e.var != var) nt.euler.push_back(e);
        nt.rat = std::move(res);
        out.add_term(std::move(nt));
        return out;
    };

    std::vector<Expression<K>> pieces =
        parallel_map<Expression<K>, ExpTerm<K>>(expr.terms(), work);
    Expression<K> out(expr.nvars());
    out.set_live(expr.live() - 1);
    for (auto& p : pieces) out.add(p);
    out.sort_terms();
    return out;
}

// Keeps only the terms whose exponential coefficient in `var` is strictly
// positive, then takes the single residue.
template <typename K>
Expression<K> res_plus(const Expression<K>& expr, std::size_t var) {
    Expression<K> filtered(expr.nvars());
    filtered.set_live(expr.live());
    for (const auto& t : expr.terms())
        if (t.expc[var] > Rational(0)) filtered.add_term(t);
    return residue_single(filtered, var);
}

// Res_{Y_1} ... Res_{Y_live}: innermost first, outer variables held constant.
template <typename K>
K iterated_residue(Expression<K> expr) {
    while (expr.live() > 0) expr = residue_single(expr, expr.live() - 1);
    K total;
    for (const auto& t : expr.terms()) {
        if (!t.euler.empty() || !t.rat.den().empty() || !t.rat.num().is_constant())
            throw std::logic_error("iterated_residue: non-constant remainder");
        total += t.rat.num().constant_value();
    }
    return total;
}

// res_plus applied in the same innermost-first order.
template <typename K>
K iterated_res_plus(Expression<K> expr) {
    while (expr.live() > 0) expr = res_plus(expr, expr.live() - 1);
    K total;
    for (const auto& t : expr.terms()) total += t.rat.num().constant_value();
    return total;
}

} // namespace itres

#endif
