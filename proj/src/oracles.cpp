#include "itres/oracles.hpp"

#include "itres/bernoulli.hpp"
#include "itres/floatconv.hpp"
#include "itres/parallel.hpp"
#include "itres/residue.hpp"
#include "itres/sudata.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace itres {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

// polynomial compiled for fast numeric evaluation
template <typename F>
struct NumPoly {
    struct Term {
        std::vector<unsigned> e;
        F c;
    };
    std::vector<Term> terms;

    static NumPoly compile(const PolyQ& p) {
        NumPoly out;
        for (const auto& [m, c] : p.terms()) {
            Term t;
            t.e.assign(m.begin(), m.end());
            t.c = to_float<F>(c);
            out.terms.push_back(std::move(t));
        }
        return out;
    }

    F eval(const std::vector<F>& x) const {
        F acc = 0;
        for (const auto& t : terms) {
            F v = t.c;
            for (std::size_t j = 0; j < x.size(); ++j)
                for (unsigned i = 0; i < t.e[j]; ++i) v *= x[j];
            acc += v;
        }
        return acc;
    }
};

// i^{-E} as (re, im) in {-1,0,1}
std::pair<int, int> i_power(long e) {
    long m = ((-e) % 4 + 4) % 4;
    switch (m) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

// phase table e^{2 pi i t/q} for t = 0..q-1
template <typename F>
std::vector<std::pair<F, F>> phase_table(long q) {
    const F pi = boost::math::constants::pi<F>();
    std::vector<std::pair<F, F>> tab(static_cast<std::size_t>(q));
    for (long t = 0; t < q; ++t) {
        using std::cos;
        using std::sin;
        F th = 2 * pi * F(t) / F(q);
        tab[static_cast<std::size_t>(t)] = {cos(th), sin(th)};
    }
    return tab;
}

template <typename F>
std::string format_float(const F& v, unsigned digits) {
    std::ostringstream os;
    os << std::setprecision(static_cast<int>(digits)) << v;
    return os.str();
}

// ---- Witten sum ----------------------------------------------------------

// Sums c^{-lambda} prod tau_r(lambda)^{m_r} / varpi(lambda)^{2g-2} over the
// chamber box 1..N per coordinate; exact phase index, float magnitude.
template <typename F>
void witten_box_sum(std::size_t n, long d, unsigned g,
                    const std::map<std::size_t, unsigned>& a_exp, unsigned long N,
                    F& re, F& im) {
    const std::size_t nv = n - 1;
    RootSystem rs(n);
    TorusPoint tc = tilde_c(n, d);
    // angle of c^{-lambda} = frac(-sum gamma_j l_j); gamma_j = t_j / n
    std::vector<long> tnum(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        Rational gj = tc.coeff[j];
        tnum[j] = static_cast<long>(mpz_get_si(
            BigInt(gj.num() * (static_cast<long>(n) / gj.den())).get_mpz_t()));
    }
    auto tab = phase_table<F>(static_cast<long>(n));

    std::vector<NumPoly<F>> taus;
    std::vector<unsigned> texp;
    for (const auto& [r, m] : a_exp) {
        if (m == 0) continue;
        taus.push_back(NumPoly<F>::compile(tau_poly(n, r)));
        texp.push_back(m);
    }
    NumPoly<F> vp = NumPoly<F>::compile(varpi_poly(n));

    // parallel over the first coordinate, deterministic block order
    re = 0;
    im = 0;
    struct Acc {
        F re{}, im{};
        Acc& operator+=(const Acc& o) {
            re += o.re;
            im += o.im;
            return *this;
        }
    };
    Acc total = parallel_block_sum<Acc>(static_cast<std::size_t>(N), [&](std::size_t blk) {
        Acc acc;
        std::vector<F> x(nv);
        std::vector<unsigned long> l(nv, 1);
        l[0] = static_cast<unsigned long>(blk) + 1;
        auto rec = [&](auto&& self, std::size_t j) -> void {
            if (j == nv) {
                long tphase = 0;
                for (std::size_t t = 0; t < nv; ++t)
                    tphase -= tnum[t] * static_cast<long>(l[t]);
                tphase = ((tphase % static_cast<long>(n)) + static_cast<long>(n)) %
                         static_cast<long>(n);
                for (std::size_t t = 0; t < nv; ++t) x[t] = F(l[t]);
                F mag = 1;
                for (std::size_t i = 0; i < taus.size(); ++i) {
                    F tv = taus[i].eval(x);
                    for (unsigned p = 0; p < texp[i]; ++p) mag *= tv;
                }
                F w = vp.eval(x);
                F wp = 1;
                for (unsigned p = 0; p < 2 * g - 2; ++p) wp *= w;
                mag /= wp;
                acc.re += mag * tab[static_cast<std::size_t>(tphase)].first;
                acc.im += mag * tab[static_cast<std::size_t>(tphase)].second;
                return;
            }
            for (unsigned long v = 1; v <= N; ++v) {
                l[j] = v;
                self(self, j + 1);
            }
        };
        rec(rec, 1);
        return acc;
    });
    re = total.re;
    im = total.im;
}

template <typename F>
LatticeSumReport witten_impl(std::size_t n, long d, unsigned g,
                             const std::map<std::size_t, unsigned>& a_exp,
                             const LatticeSumConfig& cfg) {
    // degree bookkeeping: the summand carries (2 pi i)^{sum r m_r - n_+(2g-2)}
    long degsum = 0;
    for (const auto& [r, m] : a_exp) degsum += static_cast<long>(r) * m;
    long E = static_cast<long>(n * (n - 1) / 2) * (2 * g - 2) - degsum;
    if (E <= 0)
        throw std::invalid_argument("witten_sum: class degree too large for convergence");

    const F pi = boost::math::constants::pi<F>();
    using std::pow;
    auto [ire, iim] = i_power(E);
    // c^rho Gamma (-1)^{n_+(g-1)}
    F pref = ((n - 1) % 2 == 0 ? 1 : -1);
    {
        std::size_t npos = n * (n - 1) / 2;
        if ((npos * (g - 1)) % 2 == 1) pref = -pref;
    }
    F ng = pow(F(n), static_cast<int>(g));
    pref *= ng;
    F twopi_pow = pow(2 * pi, static_cast<int>(E));

    auto eval_at = [&](unsigned long N) {
        F re, im;
        witten_box_sum<F>(n, d, g, a_exp, N, re, im);
        // multiply by i^{-E} and keep the real part; imaginary part must die
        F real_part = F(ire) * re - F(iim) * im;
        F imag_part = F(ire) * im + F(iim) * re;
        return std::make_pair(pref * real_part / twopi_pow, pref * imag_part / twopi_pow);
    };

    auto [vhalf, ihalf] = eval_at(cfg.cutoff);
    auto [vfull, ifull] = eval_at(2 * cfg.cutoff);

    LatticeSumReport rep;
    rep.value_half = static_cast<double>(vhalf);
    rep.value = static_cast<double>(vfull);
    using std::fabs;
    double scale = std::max(std::fabs(rep.value), 1e-300);
    rep.window = std::fabs(rep.value - rep.value_half) / scale;
    rep.converged = rep.window <= cfg.window_tol;
    rep.value_str = format_float(vfull, cfg.digits);
    if (static_cast<double>(fabs(ifull)) > 1e-6 * scale)
        throw std::runtime_error("witten_sum: imaginary part failed to cancel");
    return rep;
}

// ---- Szenes lattice sum --------------------------------------------------

template <typename F>
void szenes_box_sum(const SzenesFunction& fn, unsigned long N, F& re, F& im) {
    const std::size_t nv = fn.n - 1;
    RootSystem rs(fn.n);
    // common denominator q of the gamma_j: angles are multiples of 1/q
    BigInt q(1);
    for (const auto& gj : fn.gamma) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), gj.den().get_mpz_t());
    long qn = static_cast<long>(mpz_get_si(q.get_mpz_t()));
    std::vector<long> gnum(nv);
    for (std::size_t j = 0; j < nv; ++j)
        gnum[j] = static_cast<long>(mpz_get_si(BigInt(fn.gamma[j].num() * (q / fn.gamma[j].den())).get_mpz_t()));
    auto tab = phase_table<F>(qn);

    NumPoly<F> num = NumPoly<F>::compile(fn.g.num());
    std::vector<std::pair<NumPoly<F>, unsigned>> den;
    for (const auto& f : fn.g.den())
        den.emplace_back(NumPoly<F>::compile(f.base), f.exp);

    // exclude points where any root vanishes
    auto regular = [&](const std::vector<long>& l) {
        for (const auto& [a, b] : rs.positive_roots()) {
            long dot = 0;
            for (std::size_t t = a; t < b; ++t) dot += l[t];
            if (dot == 0) return false;
        }
        return true;
    };

    struct Acc {
        F re{}, im{};
        Acc& operator+=(const Acc& o) {
            re += o.re;
            im += o.im;
            return *this;
        }
    };
    // blocks over the first coordinate l_1 in [-N..N]
    Acc total = parallel_block_sum<Acc>(2 * static_cast<std::size_t>(N) + 1, [&](std::size_t blk) {
        Acc acc;
        std::vector<long> l(nv);
        l[0] = static_cast<long>(blk) - static_cast<long>(N);
        std::vector<F> x(nv);
        auto rec = [&](auto&& self, std::size_t j) -> void {
            if (j == nv) {
                if (!regular(l)) return;
                long t = 0;
                for (std::size_t u = 0; u < nv; ++u) t -= gnum[u] * l[u];
                t = ((t % qn) + qn) % qn;
                for (std::size_t u = 0; u < nv; ++u) x[u] = F(l[u]);
                F mag = num.eval(x);
                for (const auto& [dp, de] : den) {
                    F dv = dp.eval(x);
                    for (unsigned p = 0; p < de; ++p) mag /= dv;
                }
                acc.re += mag * tab[static_cast<std::size_t>(t)].first;
                acc.im += mag * tab[static_cast<std::size_t>(t)].second;
                return;
            }
            for (long v = -static_cast<long>(N); v <= static_cast<long>(N); ++v) {
                l[j] = v;
                self(self, j + 1);
            }
        };
        rec(rec, 1);
        return acc;
    });
    re = total.re;
    im = total.im;
}

template <typename F>
LatticeSumReport szenes_lhs_impl(const SzenesFunction& fn, const LatticeSumConfig& cfg) {
    // homogeneity degree of g: num degree - den degree (all homogeneous)
    long E = 0;
    for (const auto& f : fn.g.den()) E += static_cast<long>(f.base.total_degree() * f.exp);
    E -= static_cast<long>(fn.g.num().total_degree());
    if (E <= static_cast<long>(fn.n - 1))
        throw std::invalid_argument("szenes_check: test function decays too slowly");

    const F pi = boost::math::constants::pi<F>();
    using std::pow;
    auto [ire, iim] = i_power(E);
    F twopi_pow = pow(2 * pi, static_cast<int>(E));

    auto eval_at = [&](unsigned long N) {
        F re, im;
        szenes_box_sum<F>(fn, N, re, im);
        F real_part = F(ire) * re - F(iim) * im;
        return real_part / twopi_pow;
    };
    F vhalf = eval_at(cfg.cutoff);
    F vfull = eval_at(2 * cfg.cutoff);

    LatticeSumReport rep;
    rep.value_half = static_cast<double>(vhalf);
    rep.value = static_cast<double>(vfull);
    double scale = std::max(std::fabs(rep.value), 1e-300);
    rep.window = std::fabs(rep.value - rep.value_half) / scale;
    rep.converged = rep.window <= cfg.window_tol;
    rep.value_str = format_float(vfull, cfg.digits);
    return rep;
}

RatFuncQ weyl_transform(const RootSystem& rs, const WeylElement& w, const RatFuncQ& f) {
    PolyQ num = rs.weyl_apply_poly(w, f.num());
    std::vector<DenFactor> den;
    for (const auto& d : f.den()) den.push_back({rs.weyl_apply_poly(w, d.base), d.exp});
    return RatFuncQ(std::move(num), std::move(den));
}

} // namespace

LatticeSumReport witten_sum(std::size_t n, long d, unsigned g,
                            const std::map<std::size_t, unsigned>& a_exp,
                            const LatticeSumConfig& cfg) {
    if (cfg.cutoff < 1) throw std::invalid_argument("witten_sum: cutoff >= 1 required");
    if (cfg.digits <= 18) return witten_impl<long double>(n, d, g, a_exp, cfg);
    return witten_impl<Float50>(n, d, g, a_exp, cfg);
}

const std::vector<SzenesFunction>& szenes_functions() {
    static const std::vector<SzenesFunction> fns = [] {
        std::vector<SzenesFunction> v;
        {
            PolyQ y = PolyQ::variable(1, 0);
            RatFuncQ g = RatFuncQ::constant(1, Rational(1));
            g.div_poly(y);
            g.div_poly(y);
            v.push_back({2, {Rational(1, 2)}, g, "exp(-Y/2)/Y^2"});
        }
        {
            PolyQ y = PolyQ::variable(1, 0);
            RatFuncQ g = RatFuncQ::constant(1, Rational(1));
            for (int i = 0; i < 4; ++i) g.div_poly(y);
            v.push_back({2, {Rational(1, 2)}, g, "exp(-Y/2)/Y^4"});
        }
        {
            PolyQ y = PolyQ::variable(1, 0);
            RatFuncQ g = RatFuncQ::constant(1, Rational(1));
            g.div_poly(y);
            g.div_poly(y);
            v.push_back({2, {Rational(1, 3)}, g, "exp(-Y/3)/Y^2"});
        }
        {
            RatFuncQ g = RatFuncQ::constant(2, Rational(1));
            RootSystem rs(3);
            for (std::size_t i = 0; i < 3; ++i) {
                g.div_poly(rs.root_form(i));
                g.div_poly(rs.root_form(i));
            }
            v.push_back({3, {Rational(1, 3), Rational(1, 3)}, g,
                         "exp(-(Y1+Y2)/3)/varpi^2"});
        }
        return v;
    }();
    return fns;
}

SzenesReport szenes_check(std::size_t fn_id, const LatticeSumConfig& cfg) {
    const auto& fns = szenes_functions();
    if (fn_id >= fns.size()) throw std::invalid_argument("szenes_check: unknown test function");
    const SzenesFunction& fn = fns[fn_id];
    for (const auto& gj : fn.gamma)
        if (gj < Rational(0) || gj >= Rational(1))
            throw std::invalid_argument("szenes_check: exponent not reduced");

    SzenesReport rep;
    if (cfg.digits <= 18)
        rep.lhs = szenes_lhs_impl<long double>(fn, cfg);
    else
        rep.lhs = szenes_lhs_impl<Float50>(fn, cfg);

    // RHS: iterated residue of sum_w [[w f]] / prod (e^{-Y_j} - 1)
    RootSystem rs(fn.n);
    const std::size_t nv = fn.n - 1;
    ExprQ expr(nv);
    TorusPoint vg;
    vg.coeff = fn.gamma;
    for (const auto& w : weyl_W_n_minus_1(fn.n)) {
        ExpTerm<Rational> t(nv);
        TorusPoint moved = bracket(rs.weyl_apply(w, vg));
        for (std::size_t j = 0; j < nv; ++j) t.expc[j] = -moved.coeff[j];
        for (std::size_t j = 0; j < nv; ++j) t.euler.push_back({j, Rational(-1), 1});
        t.rat = weyl_transform(rs, w, fn.g);
        expr.add_term(std::move(t));
    }
    rep.rhs = iterated_residue(std::move(expr));

    double rhsd = rep.rhs.to_double();
    rep.diff = std::fabs(rep.lhs.value - rhsd);
    return rep;
}

ThaddeusValue thaddeus_value(unsigned g, unsigned j) {
    if (g < 2) throw std::invalid_argument("thaddeus_value: genus >= 2 required");
    if (j > g - 1) throw std::invalid_argument("thaddeus_value: need j <= g-1");
    ThaddeusValue out;
    // 2^{2g} / (2 (8 pi^2)^{g-1}) * pi^{2j} * eta(2g-2-2j); pi powers cancel
    long pi_exp = -2 * (static_cast<long>(g) - 1) + 2 * static_cast<long>(j);
    Rational val = pow2(2 * static_cast<long>(g)) / (Rational(2) * pow2(3 * (static_cast<long>(g) - 1)));
    unsigned s = 2 * g - 2 - 2 * j;
    if (s == 0) {
        out.regularized = true;
        val *= Rational(1, 2); // eta(0), Abel sum
    } else {
        val *= eta_even_over_pi_pow(s);
        pi_exp += static_cast<long>(s);
    }
    if (pi_exp != 0) throw std::logic_error("thaddeus_value: pi powers failed to cancel");
    out.value = val;
    return out;
}

Rational svol_value(unsigned g) {
    if (g < 2) throw std::invalid_argument("svol_value: genus >= 2 required");
    Rational b = bernoulli(2 * g - 2).abs();
    return (pow2(static_cast<long>(g) - 1) - pow2(2 - static_cast<long>(g))) * b /
           Rational(factorial(2 * g - 2), BigInt(1));
}

} // namespace itres
