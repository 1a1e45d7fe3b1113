#ifndef ITRES_JET_HPP
#define ITRES_JET_HPP

#include "itres/rational.hpp"

#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace itres {

// Truncated polynomial ring in nilpotent parameters. Each variable j has a
// hard degree cap caps[j]; multideg exceeding any cap are discarded by every
// operation. With no variables the ring degenerates to Rational.
//
// The caps vector is part of the value: mixing jets with different caps is a
// programming error (asserted).
class Jet {
public:
    using Multideg = std::vector<unsigned>;

    Jet() = default;
    explicit Jet(std::vector<unsigned> caps) : caps_(std::move(caps)) {}
    Jet(std::vector<unsigned> caps, const Rational& c) : caps_(std::move(caps)) {
        if (!c.is_zero()) c_[Multideg(caps_.size(), 0)] = c;
    }

    static Jet constant(const std::vector<unsigned>& caps, const Rational& c) {
        return Jet(caps, c);
    }
    // The generator delta_j (zero if its cap is 0).
    static Jet variable(const std::vector<unsigned>& caps, std::size_t j) {
        Jet r(caps);
        assert(j < caps.size());
        if (caps[j] >= 1) {
            Multideg d(caps.size(), 0);
            d[j] = 1;
            r.c_[d] = Rational(1);
        }
        return r;
    }

    const std::vector<unsigned>& caps() const { return caps_; }
    std::size_t nvars() const { return caps_.size(); }
    bool is_zero() const { return c_.empty(); }

    Rational constant_part() const {
        auto it = c_.find(Multideg(caps_.size(), 0));
        return it == c_.end() ? Rational() : it->second;
    }

    bool is_constant() const {
        return c_.empty() || (c_.size() == 1 && c_.begin()->first == Multideg(caps_.size(), 0));
    }

    // Raw coefficient of prod delta_j^{d_j}; callers realize derivatives at 0
    // by multiplying with prod d_j!.
    Rational coeff(const Multideg& d) const {
        if (d.size() != caps_.size()) throw std::invalid_argument("Jet::coeff: arity mismatch");
        for (std::size_t j = 0; j < d.size(); ++j)
            if (d[j] > caps_[j]) throw std::out_of_range("Jet::coeff: multidegree above cap");
        auto it = c_.find(d);
        return it == c_.end() ? Rational() : it->second;
    }

    Jet operator-() const {
        Jet r(caps_);
        for (const auto& [d, v] : c_) r.c_[d] = -v;
        return r;
    }

    // Constants (capless or not) embed canonically into any cap ring; promote
    // on contact so scalar traffic does not need to know the caps.
    Jet promoted(const std::vector<unsigned>& caps) const {
        if (caps_ == caps) return *this;
        assert(is_constant());
        return Jet(caps, constant_part());
    }

    Jet& operator+=(const Jet& o) {
        if (caps_ != o.caps_) {
            // promote toward the side that actually carries caps
            if (is_constant() && (!o.is_constant() || caps_.empty())) {
                *this = promoted(o.caps_);
                return *this += o;
            }
            if (o.is_constant()) return *this += o.promoted(caps_);
            assert(false && "Jet: cap mismatch");
        }
        for (const auto& [d, v] : o.c_) {
            auto it = c_.find(d);
            if (it == c_.end()) {
                c_[d] = v;
            } else {
                it->second += v;
                if (it->second.is_zero()) c_.erase(it);
            }
        }
        return *this;
    }
    Jet& operator-=(const Jet& o) { return *this += -o; }

    Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        if (a.caps_ != b.caps_) {
            if (a.is_constant() && (!b.is_constant() || a.caps_.empty()))
                return a.promoted(b.caps_) * b;
            if (b.is_constant()) return a * b.promoted(a.caps_);
            assert(false && "Jet: cap mismatch");
        }
        Jet r(a.caps_);
        for (const auto& [da, va] : a.c_)
            for (const auto& [db, vb] : b.c_) {
                Multideg d(r.caps_.size());
                bool keep = true;
                for (std::size_t j = 0; j < d.size(); ++j) {
                    d[j] = da[j] + db[j];
                    if (d[j] > r.caps_[j]) { keep = false; break; }
                }
                if (!keep) continue;
                auto it = r.c_.find(d);
                if (it == r.c_.end()) {
                    Rational p = va * vb;
                    if (!p.is_zero()) r.c_[d] = p;
                } else {
                    it->second += va * vb;
                    if (it->second.is_zero()) r.c_.erase(it);
                }
            }
        return r;
    }

    Jet& mul_rational(const Rational& s) {
        if (s.is_zero()) { c_.clear(); return *this; }
        for (auto& [d, v] : c_) v *= s;
        return *this;
    }

    friend bool operator==(const Jet& a, const Jet& b) {
        if (a.caps_ == b.caps_) return a.c_ == b.c_;
        // constants embed canonically in any cap ring
        if (a.is_constant() && b.is_constant())
            return a.constant_part() == b.constant_part();
        return false;
    }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }
    friend bool operator<(const Jet& a, const Jet& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        auto ia = a.c_.begin(), ib = b.c_.begin();
        for (; ia != a.c_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return false;
    }

    bool is_nilpotent() const { return constant_part().is_zero(); }

    // Multiplicative inverse; requires an invertible constant part.
    Jet inverse() const {
        Rational c0 = constant_part();
        if (c0.is_zero()) throw std::domain_error("Jet::inverse: constant part is zero");
        Jet n = *this;
        n.c_.erase(Multideg(caps_.size(), 0)); // nilpotent part
        Jet acc = Jet::constant(caps_, c0.inverse());
        Jet pw = Jet::constant(caps_, Rational(1));
        Rational c0inv = c0.inverse();
        unsigned total_cap = 0;
        for (unsigned c : caps_) total_cap += c;
        Rational sgnpw(1);
        Jet result = acc;
        for (unsigned k = 1; k <= total_cap; ++k) {
            pw = pw * n;
            if (pw.is_zero()) break;
            sgnpw = -sgnpw;
            Jet t = pw;
            t.mul_rational(sgnpw * c0inv.pow(static_cast<long>(k) + 1));
            result += t;
        }
        return result;
    }

    // exp of a nilpotent jet (finite sum).
    Jet exp_nilpotent() const {
        if (!is_nilpotent())
            throw std::domain_error("Jet::exp_nilpotent: constant part must vanish");
        Jet result = Jet::constant(caps_, Rational(1));
        Jet pw = result;
        unsigned total_cap = 0;
        for (unsigned c : caps_) total_cap += c;
        for (unsigned k = 1; k <= total_cap; ++k) {
            pw = pw * (*this);
            if (pw.is_zero()) break;
            Jet t = pw;
            t.mul_rational(Rational(BigInt(1), factorial(k)));
            result += t;
        }
        return result;
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [d, v] : c_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << v.str() << ")";
            for (std::size_t j = 0; j < d.size(); ++j)
                if (d[j] > 0) os << "*t" << j << "^" << d[j];
        }
        return os.str();
    }

    const std::map<Multideg, Rational>& coeffs() const { return c_; }

private:
    std::vector<unsigned> caps_;
    std::map<Multideg, Rational> c_;
};

} // namespace itres

#endif
