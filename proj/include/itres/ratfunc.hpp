#ifndef ITRES_RATFUNC_HPP
#define ITRES_RATFUNC_HPP

#include "itres/poly.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

namespace itres {

// One denominator factor base^exp. Bases are kept primitive: integer
// coefficients with gcd 1 and positive lex-leading coefficient; the rational
// scale extracted during normalization moves to the numerator side.
struct DenFactor {
    PolyQ base;
    unsigned exp = 1;

    friend bool operator==(const DenFactor& a, const DenFactor& b) {
        return a.exp == b.exp && a.base == b.base;
    }
    friend bool operator<(const DenFactor& a, const DenFactor& b) {
        if (a.base != b.base) return a.base < b.base;
        return a.exp < b.exp;
    }
};

// Normalize a base in place, returning the scale s with original = s * base.
inline Rational normalize_base(PolyQ& base) {
    Rational c = base.content();
    if (base.leading_term().second.sign() < 0) c = -c;
    base.mul_rational(c.inverse());
    return c;
}

// Rational function: numerator over K, denominator a product of primitive
// rational-coefficient factors. The engine's flows only ever produce
// denominators with rational coefficients; jets stay in numerators. No full
// multivariate gcd is attempted — cancellation is content removal, pure
// variable-power cancellation, and exact trial division during div().
template <typename K>
class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(MultiPoly<K> num) : num_(std::move(num)) {}
    RatFunc(MultiPoly<K> num, std::vector<DenFactor> den)
        : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static RatFunc constant(std::size_t nvars, const Rational& c) {
        return RatFunc(MultiPoly<K>::constant(nvars, c));
    }

    const MultiPoly<K>& num() const { return num_; }
    const std::vector<DenFactor>& den() const { return den_; }
    std::size_t nvars() const { return num_.nvars(); }
    bool is_zero() const { return num_.is_zero(); }

    PolyQ den_expanded() const {
        PolyQ d = PolyQ::constant(num_.nvars(), Rational(1));
        for (const auto& f : den_) d = d * f.base.pow(f.exp);
        return d;
    }

    RatFunc operator-() const { return RatFunc(-num_, den_); }

    RatFunc& mul_rational(const Rational& s) {
        num_.mul_rational(s);
        if (num_.is_zero()) den_.clear();
        return *this;
    }
    RatFunc& mul_scalar(const K& s) {
        num_.mul_scalar(s);
        if (num_.is_zero()) den_.clear();
        return *this;
    }

    RatFunc& mul_poly(const MultiPoly<K>& p) {
        num_ = num_ * p;
        normalize();
        return *this;
    }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        RatFunc r;
        r.num_ = a.num_ * b.num_;
        r.den_ = a.den_;
        r.den_.insert(r.den_.end(), b.den_.begin(), b.den_.end());
        r.normalize();
        return r;
    }
    RatFunc& operator*=(const RatFunc& o) { *this = *this * o; return *this; }

    // Divide by a polynomial: use exact division when it goes through,
    // otherwise record a new denominator factor.
    RatFunc& div_poly(PolyQ d) {
        if (d.is_zero()) throw std::domain_error("RatFunc: division by zero polynomial");
        Rational s = normalize_base(d);
        num_.mul_rational(s.inverse());
        if (num_.is_zero()) { den_.clear(); return *this; }
        if (d.is_constant()) { normalize(); return *this; }
        auto q = MultiPoly<K>::divide_exact(num_, promote<K>(d));
        if (q) {
            num_ = *q;
        } else {
            den_.push_back({std::move(d), 1});
        }
        normalize();
        return *this;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        // common denominator: per-base max exponent
        std::vector<DenFactor> common = a.den_;
        for (const auto& f : b.den_) {
            bool found = false;
            for (auto& g : common)
                if (g.base == f.base) {
                    g.exp = std::max(g.exp, f.exp);
                    found = true;
                    break;
                }
            if (!found) common.push_back(f);
        }
        auto lift = [&](const RatFunc& x) {
            MultiPoly<K> n = x.num_;
            for (const auto& g : common) {
                unsigned have = 0;
                for (const auto& f : x.den_)
                    if (f.base == g.base) have = f.exp;
                if (g.exp > have) n = n * promote<K>(g.base.pow(g.exp - have));
            }
            return n;
        };
        RatFunc r;
        r.num_ = lift(a) + lift(b);
        r.den_ = std::move(common);
        r.normalize();
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    RatFunc& operator+=(const RatFunc& o) { *this = *this + o; return *this; }

    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
        // b must have rational numerator content to invert cleanly when K=Jet;
        // general K division multiplies by the reciprocal structure.
        RatFunc r = a;
        for (const auto& f : b.den_) r.num_ = r.num_ * promote<K>(f.base.pow(f.exp));
        r.normalize();
        // divide by b's numerator
        if constexpr (std::is_same_v<K, Rational>) {
            r.div_poly(b.num_);
        } else {
            // jet-coefficient divisor: only exact division is supported
            auto q = MultiPoly<K>::divide_exact(r.num_, b.num_);
            if (!q) throw std::domain_error("RatFunc: inexact division by jet polynomial");
            r.num_ = *q;
            r.normalize();
        }
        return r;
    }

    // Exact equality via cross-multiplication.
    friend bool equal_values(const RatFunc& a, const RatFunc& b) {
        return a.num_ * promote<K>(b.den_expanded()) == b.num_ * promote<K>(a.den_expanded());
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    template <typename KK = K>
    Rational eval(const std::vector<Rational>& x) const {
        static_assert(std::is_same_v<KK, Rational>);
        Rational n = num_.eval(x);
        for (const auto& f : den_) {
            Rational d = f.base.eval(x);
            if (d.is_zero()) throw std::domain_error("RatFunc::eval: pole");
            n /= d.pow(f.exp);
        }
        return n;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[" << num_.str() << "]";
        for (const auto& f : den_)
            os << " / [" << f.base.str() << "]^" << f.exp;
        return os.str();
    }

    // Cancels common pure powers of var between numerator and denominator
    // monomial factors; used after residue steps where everything is
    // univariate in the active variable.
    void cancel_var_power(std::size_t var) {
        unsigned nmin = num_.min_exp_in(var);
        if (nmin == 0 || num_.is_zero()) return;
        for (auto& f : den_) {
            if (nmin == 0) break;
            // factor base is a pure power of var?
            if (f.base.term_count() == 1) {
                const auto& [m, c] = *f.base.terms().begin();
                unsigned k = m[var];
                if (k > 0 && mono_total(m) == k) {
                    unsigned cancel = std::min(nmin, f.exp * k) / k;
                    if (cancel > 0) {
                        num_ = num_.shift_var_exp(var, -static_cast<int>(cancel * k));
                        f.exp -= cancel;
                        nmin -= cancel * k;
                    }
                }
            }
        }
        den_.erase(std::remove_if(den_.begin(), den_.end(),
                                  [](const DenFactor& f) { return f.exp == 0; }),
                   den_.end());
    }

private:
    void normalize() {
        if (num_.is_zero()) { den_.clear(); return; }
        // merge identical bases, drop constants, sort
        std::vector<DenFactor> merged;
        Rational scale(1);
        for (auto& f : den_) {
            if (f.exp == 0) continue;
            if (f.base.is_zero()) throw std::domain_error("RatFunc: zero denominator factor");
            Rational s = normalize_base(f.base);
            scale *= s.pow(static_cast<long>(f.exp));
            if (f.base.is_constant()) continue;
            bool found = false;
            for (auto& g : merged)
                if (g.base == f.base) {
                    g.exp += f.exp;
                    found = true;
                    break;
                }
            if (!found) merged.push_back(std::move(f));
        }
        std::sort(merged.begin(), merged.end());
        den_ = std::move(merged);
        if (scale != Rational(1)) num_.mul_rational(scale.inverse());
        for (std::size_t v = 0; v < num_.nvars(); ++v) cancel_var_power(v);
        // opportunistic exact cancellation (skipped for large numerators)
        if (num_.term_count() <= 200) {
            for (auto& f : den_) {
                while (f.exp > 0) {
                    auto q = MultiPoly<K>::divide_exact(num_, promote<K>(f.base));
                    if (!q) break;
                    num_ = std::move(*q);
                    --f.exp;
                }
            }
            den_.erase(std::remove_if(den_.begin(), den_.end(),
                                      [](const DenFactor& f) { return f.exp == 0; }),
                       den_.end());
        }
    }

    MultiPoly<K> num_;
    std::vector<DenFactor> den_;
};

using RatFuncQ = RatFunc<Rational>;
using RatFuncJ = RatFunc<Jet>;

} // namespace itres

#endif
