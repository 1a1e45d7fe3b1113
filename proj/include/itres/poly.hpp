#ifndef ITRES_POLY_HPP
#define ITRES_POLY_HPP

#include "itres/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace itres {

using Mono = std::vector<unsigned>;

inline unsigned mono_total(const Mono& m) {
    unsigned t = 0;
    for (unsigned e : m) t += e;
    return t;
}

// Sparse multivariate polynomial in a fixed number of variables, coefficients
// in K (Rational or Jet). Term order is lex on exponent vectors via map.
template <typename K>
class MultiPoly {
public:
    using Terms = std::map<Mono, K>;

    MultiPoly() : nvars_(0) {}
    explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

    static MultiPoly zero(std::size_t nvars) { return MultiPoly(nvars); }

    static MultiPoly constant(std::size_t nvars, const K& c) {
        MultiPoly p(nvars);
        if (!ScalarTraits<K>::is_zero(c)) p.t_[Mono(nvars, 0)] = c;
        return p;
    }
    static MultiPoly constant(std::size_t nvars, const Rational& c)
        requires(!std::is_same_v<K, Rational>)
    {
        return constant(nvars, ScalarTraits<K>::from_rational(c));
    }

    static MultiPoly variable(std::size_t nvars, std::size_t j) {
        assert(j < nvars);
        MultiPoly p(nvars);
        Mono m(nvars, 0);
        m[j] = 1;
        p.t_[m] = ScalarTraits<K>::from_rational(Rational(1));
        return p;
    }

    // sum_j c_j Y_j
    static MultiPoly linear_form(const std::vector<Rational>& c) {
        MultiPoly p(c.size());
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j].is_zero()) continue;
            Mono m(c.size(), 0);
            m[j] = 1;
            p.t_[m] = ScalarTraits<K>::from_rational(c[j]);
        }
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t term_count() const { return t_.size(); }
    const Terms& terms() const { return t_; }

    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && mono_total(t_.begin()->first) == 0);
    }
    K constant_value() const {
        auto it = t_.find(Mono(nvars_, 0));
        return it == t_.end() ? K() : it->second;
    }

    void set_coeff(const Mono& m, const K& c) {
        assert(m.size() == nvars_);
        if (ScalarTraits<K>::is_zero(c))
            t_.erase(m);
        else
            t_[m] = c;
    }
    K coeff(const Mono& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? K() : it->second;
    }

    void add_term(const Mono& m, const K& c) {
        assert(m.size() == nvars_);
        if (ScalarTraits<K>::is_zero(c)) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_[m] = c;
        } else {
            it->second += c;
            if (ScalarTraits<K>::is_zero(it->second)) t_.erase(it);
        }
    }

    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (const auto& [m, c] : t_) r.t_[m] = -c;
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        assert(nvars_ == o.nvars_ || is_zero() || o.is_zero());
        if (is_zero()) nvars_ = std::max(nvars_, o.nvars_);
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) { return *this += -o; }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        assert(a.nvars_ == b.nvars_ || a.is_zero() || b.is_zero());
        MultiPoly r(std::max(a.nvars_, b.nvars_));
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) {
                Mono m(r.nvars_, 0);
                for (std::size_t j = 0; j < m.size(); ++j) m[j] = ma[j] + mb[j];
                r.add_term(m, ca * cb);
            }
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& o) { *this = *this * o; return *this; }

    MultiPoly& mul_rational(const Rational& s) {
        if (s.is_zero()) { t_.clear(); return *this; }
        for (auto& [m, c] : t_) ScalarTraits<K>::mul_rational(c, s);
        return *this;
    }
    MultiPoly& mul_scalar(const K& s) {
        MultiPoly f = constant(nvars_, s);
        *this = *this * f;
        return *this;
    }

    MultiPoly pow(unsigned e) const {
        MultiPoly r = constant(nvars_, Rational(1));
        MultiPoly b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1u;
        }
        return r;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : t_) d = std::max(d, mono_total(m));
        return d;
    }
    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& [m, c] : t_) d = std::max(d, m[var]);
        return d;
    }
    // Largest k with var^k dividing the polynomial (0 for the zero poly).
    unsigned min_exp_in(std::size_t var) const {
        if (t_.empty()) return 0;
        unsigned k = ~0u;
        for (const auto& [m, c] : t_) k = std::min(k, m[var]);
        return k;
    }

    MultiPoly shift_var_exp(std::size_t var, int delta) const {
        MultiPoly r(nvars_);
        for (const auto& [m, c] : t_) {
            Mono mm = m;
            assert(static_cast<int>(mm[var]) + delta >= 0);
            mm[var] = static_cast<unsigned>(static_cast<int>(mm[var]) + delta);
            r.t_[mm] = c;
        }
        return r;
    }

    // Coefficient of var^k, as a polynomial with the same arity (var slot 0).
    MultiPoly coeff_of(std::size_t var, unsigned k) const {
        MultiPoly r(nvars_);
        for (const auto& [m, c] : t_)
            if (m[var] == k) {
                Mono mm = m;
                mm[var] = 0;
                r.t_[mm] = c;
            }
        return r;
    }

    MultiPoly truncate_total(unsigned maxdeg) const {
        MultiPoly r(nvars_);
        for (const auto& [m, c] : t_)
            if (mono_total(m) <= maxdeg) r.t_[m] = c;
        return r;
    }

    MultiPoly partial(std::size_t var) const {
        MultiPoly r(nvars_);
        for (const auto& [m, c] : t_) {
            if (m[var] == 0) continue;
            Mono mm = m;
            mm[var] -= 1;
            K cc = c;
            ScalarTraits<K>::mul_rational(cc, Rational(static_cast<long>(m[var])));
            r.add_term(mm, cc);
        }
        return r;
    }

    // Substitute each variable by a polynomial (all of arity new_nvars).
    MultiPoly subst(const std::vector<MultiPoly>& images, std::size_t new_nvars) const {
        MultiPoly r(new_nvars);
        assert(images.size() == nvars_);
        for (const auto& [m, c] : t_) {
            MultiPoly term = constant(new_nvars, c);
            for (std::size_t j = 0; j < nvars_; ++j)
                if (m[j] > 0) term = term * images[j].pow(m[j]);
            r += term;
        }
        return r;
    }

    // Substitute -Y_j for every variable: picks up (-1)^{total degree} per term.
    MultiPoly negate_vars() const {
        MultiPoly r(nvars_);
        for (const auto& [m, c] : t_) {
            K cc = c;
            if (mono_total(m) % 2 == 1) cc = -cc;
            r.t_[m] = cc;
        }
        return r;
    }

    template <typename KK = K>
    Rational eval(const std::vector<Rational>& x) const {
        static_assert(std::is_same_v<KK, Rational>, "eval is for Rational coefficients");
        Rational acc;
        for (const auto& [m, c] : t_) {
            Rational t = c;
            for (std::size_t j = 0; j < nvars_; ++j)
                if (m[j]) t *= x[j].pow(m[j]);
            acc += t;
        }
        return acc;
    }

    // gcd of all rational coefficients appearing in the poly.
    Rational content() const {
        Rational g;
        for (const auto& [m, c] : t_) g = gcd(g, ScalarTraits<K>::content(c));
        return g;
    }

    const std::pair<const Mono, K>& leading_term() const {
        assert(!t_.empty());
        return *t_.rbegin(); // lex-largest
    }

    // Exact division; nullopt when the division leaves a remainder. The
    // divisor's lex-leading coefficient must be invertible in K.
    static std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b) {
        if (b.is_zero()) throw std::domain_error("divide_exact: zero divisor");
        if (a.is_zero()) return MultiPoly(a.nvars_ ? a.nvars_ : b.nvars_);
        assert(a.nvars_ == b.nvars_);
        const auto& [lm, lc] = b.leading_term();
        if (!ScalarTraits<K>::is_invertible(lc)) return std::nullopt;
        K lcinv = ScalarTraits<K>::inverse(lc);
        MultiPoly rem = a;
        MultiPoly quot(a.nvars_);
        while (!rem.is_zero()) {
            const auto& [rm, rc] = rem.leading_term();
            Mono q(rem.nvars_);
            for (std::size_t j = 0; j < q.size(); ++j) {
                if (rm[j] < lm[j]) return std::nullopt;
                q[j] = rm[j] - lm[j];
            }
            K qc = rc * lcinv;
            quot.add_term(q, qc);
            MultiPoly sub(rem.nvars_);
            sub.t_[q] = qc;
            rem -= sub * b;
        }
        return quot;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.t_ == b.t_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }
    friend bool operator<(const MultiPoly& a, const MultiPoly& b) {
        if (a.t_.size() != b.t_.size()) return a.t_.size() < b.t_.size();
        auto ia = a.t_.begin(), ib = b.t_.begin();
        for (; ia != a.t_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first;
            if constexpr (std::is_same_v<K, Rational>) {
                if (ia->second != ib->second) return ia->second < ib->second;
            } else {
                if (ia->second != ib->second) return ia->second < ib->second;
            }
        }
        return false;
    }

    std::string str(const std::string& varname = "Y") const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : t_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << ScalarTraits<K>::str(c) << ")";
            for (std::size_t j = 0; j < nvars_; ++j) {
                if (m[j] == 0) continue;
                os << "*" << varname << (j + 1);
                if (m[j] > 1) os << "^" << m[j];
            }
        }
        return os.str();
    }

private:
    std::size_t nvars_;
    Terms t_;
};

using PolyQ = MultiPoly<Rational>;
using PolyJ = MultiPoly<Jet>;

// Promote rational coefficients into any scalar ring.
template <typename K>
MultiPoly<K> promote(const PolyQ& p) {
    MultiPoly<K> r(p.nvars());
    for (const auto& [m, c] : p.terms())
        r.set_coeff(m, ScalarTraits<K>::from_rational(c));
    return r;
}
template <>
inline MultiPoly<Rational> promote<Rational>(const PolyQ& p) {
    return p;
}

} // namespace itres

#endif
