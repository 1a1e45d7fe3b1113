#include "itres/verlinde.hpp"

#include "itres/bernoulli.hpp"
#include "itres/floatconv.hpp"
#include "itres/pairing.hpp"
#include "itres/residue.hpp"
#include "itres/sudata.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace itres {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

Rational weyl_prefactor(std::size_t n, unsigned g) {
    std::size_t npos = n * (n - 1) / 2;
    Rational sign(((npos * (g - 1)) % 2 == 0) ? 1 : -1);
    return sign / Rational(factorial(n), BigInt(1));
}

// coefficients of (u e^{u/2}/(e^u-1))^{2g-2} through u^len-1; an even series
std::vector<Rational> sinh_ratio_series(unsigned power, std::size_t len) {
    std::vector<Rational> bern(len), expo(len), base(len, Rational(0));
    for (std::size_t m = 0; m < len; ++m) {
        Rational mf(factorial(m), BigInt(1));
        bern[m] = bernoulli(m) / mf;
        expo[m] = pow2(-static_cast<long>(m)) / mf;
    }
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = 0; i + j < len; ++j) base[i + j] += bern[i] * expo[j];
    // base = u/(e^u-1) * e^{u/2}; raise to the even power
    std::vector<Rational> out(len, Rational(0));
    out[0] = Rational(1);
    for (unsigned k = 0; k < power; ++k) {
        std::vector<Rational> nx(len, Rational(0));
        for (std::size_t i = 0; i < len; ++i) {
            if (out[i].is_zero()) continue;
            for (std::size_t j = 0; i + j < len; ++j) nx[i + j] += out[i] * base[j];
        }
        out = std::move(nx);
    }
    return out;
}

// substitute a univariate series into a linear form, truncating total degree
PolyQ series_of_linear_form(const std::vector<Rational>& ser, const PolyQ& form,
                            unsigned maxdeg) {
    PolyQ acc = PolyQ::constant(form.nvars(), ser[0]);
    PolyQ pw = PolyQ::constant(form.nvars(), Rational(1));
    for (std::size_t m = 1; m < ser.size() && m <= maxdeg; ++m) {
        pw = (pw * form).truncate_total(maxdeg);
        if (pw.is_zero()) break;
        if (ser[m].is_zero()) continue;
        PolyQ t = pw;
        t.mul_rational(ser[m]);
        acc += t;
    }
    return acc;
}

template <typename F>
F pi_const() {
    return boost::math::constants::pi<F>();
}

template <typename F>
void verlinde_sum_impl(const VerlindeSpec& spec, F& re, F& im) {
    const std::size_t nv = spec.n - 1;
    const unsigned long r = spec.r();
    RootSystem rs(spec.n);
    TorusPoint tc = tilde_c(spec.n, spec.d);
    const F pi = pi_const<F>();

    // n^{g-1} r^{(n-1)(g-1)} absorbs the S_{0 lambda} normalization
    using std::pow;
    F norm = pow(F(spec.n), static_cast<int>(spec.g - 1)) *
             pow(F(r), static_cast<int>((spec.n - 1) * (spec.g - 1)));

    std::vector<unsigned long> l(nv, 1);
    re = 0;
    im = 0;
    auto add_term = [&]() {
        // phase -<lambda - rho, c~>, exact angle
        Rational ang;
        for (std::size_t j = 0; j < nv; ++j)
            ang -= tc.coeff[j] * Rational(static_cast<long>(l[j]) - 1);
        ang = ang.frac();
        F theta = 2 * pi * to_float<F>(ang);
        F denom = 1;
        for (const auto& [a, b] : rs.positive_roots()) {
            unsigned long dot = 0;
            for (std::size_t t = a; t < b; ++t) dot += l[t];
            using std::sin;
            F s = 2 * sin(pi * F(dot) / F(r));
            using std::pow;
            denom *= pow(s, static_cast<int>(2 * spec.g - 2));
        }
        using std::cos;
        using std::sin;
        re += norm * cos(theta) / denom;
        im += norm * sin(theta) / denom;
    };
    // l_j >= 1 with sum < r, lex order
    auto rec = [&](auto&& self, std::size_t j, unsigned long used) -> void {
        if (j == nv) {
            add_term();
            return;
        }
        unsigned long tail = static_cast<unsigned long>(nv - 1 - j);
        for (unsigned long v = 1; used + v + tail < r; ++v) {
            l[j] = v;
            self(self, j + 1, used + v);
        }
    };
    rec(rec, 0, 0);
}

template <typename F>
std::string format_float(const F& v, unsigned digits) {
    std::ostringstream os;
    os << std::setprecision(static_cast<int>(digits)) << v;
    return os.str();
}

} // namespace

void VerlindeSpec::validate() const {
    if (n < 2) throw std::invalid_argument("verlinde: n >= 2 required");
    if (g < 2) throw std::invalid_argument("verlinde: genus >= 2 required");
    BigInt gg;
    mpz_gcd(gg.get_mpz_t(), BigInt(static_cast<long>(n)).get_mpz_t(), BigInt(d).get_mpz_t());
    if (gg != 1) throw std::invalid_argument("verlinde: gcd(n,d) = 1 required");
    if (k % n != 0) throw std::invalid_argument("verlinde: n must divide k");
}

Rational verlinde_residue_D(const VerlindeSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    const unsigned g = spec.g;
    const unsigned long r = spec.r();
    const unsigned maxdeg = static_cast<unsigned>(n * (n - 1) / 2) * (2 * g - 2);

    RootSystem rs(n);
    std::vector<Rational> ser = sinh_ratio_series(2 * g - 2, maxdeg + 1);
    PolyQ numerator = PolyQ::constant(n - 1, Rational(1));
    for (std::size_t i = 0; i < rs.num_positive_roots(); ++i) {
        numerator =
            (numerator * series_of_linear_form(ser, rs.root_form(i), maxdeg))
                .truncate_total(maxdeg);
    }

    Rational rscale(static_cast<long>(r));
    ExprQ expr = weyl_phase_expression(n, spec.d, g, numerator, rscale, rscale);
    Rational pref = weyl_prefactor(n, g) *
                    Rational(BigInt(static_cast<long>(n)), BigInt(1)).pow(g) *
                    rscale.pow(static_cast<long>((n - 1) * g));
    expr.mul_rational(pref);
    Rational v = iterated_residue(std::move(expr));
    return v;
}

std::string verlinde_sum_V(const VerlindeSpec& spec, unsigned digits, double& approx) {
    spec.validate();
    if (digits <= 18) {
        long double re = 0, im = 0;
        verlinde_sum_impl<long double>(spec, re, im);
        if (std::fabs(static_cast<double>(im)) >
            1e-9 * std::max(1.0, std::fabs(static_cast<double>(re))))
            throw std::runtime_error("verlinde_sum_V: imaginary part failed to cancel");
        approx = static_cast<double>(re);
        return format_float(re, digits);
    }
    Float50 re = 0, im = 0;
    verlinde_sum_impl<Float50>(spec, re, im);
    Float50 rabs = abs(re);
    Float50 tol = Float50("1e-30") * (rabs > 1 ? rabs : Float50(1));
    if (abs(im) > tol)
        throw std::runtime_error("verlinde_sum_V: imaginary part failed to cancel");
    approx = static_cast<double>(re);
    return format_float(re, digits > 50 ? 50 : digits);
}

VerlindeReport verlinde_check(const VerlindeSpec& spec, unsigned digits) {
    VerlindeReport rep;
    rep.D = verlinde_residue_D(spec);
    rep.integral = rep.D.is_integer();
    rep.nonneg = rep.D >= Rational(0);
    rep.V = verlinde_sum_V(spec, digits, rep.V_approx);

    Float50 vf(rep.V.c_str());
    Float50 df = to_float<Float50>(rep.D);
    Float50 dabs = abs(df);
    Float50 denom = dabs > 1 ? dabs : Float50(1);
    Float50 rel = abs(vf - df) / denom;
    rep.rel_err = static_cast<double>(rel);
    rep.agree = rel < Float50("1e-9");
    return rep;
}

} // namespace itres
