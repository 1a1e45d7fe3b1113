#ifndef ITRES_RATIONAL_HPP
#define ITRES_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace itres {

using BigInt = mpz_class;

// Exact rational scalar. mpq keeps the value canonical (gcd 1, positive
// denominator) after every arithmetic operation.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }
    Rational(const BigInt& n, const BigInt& d) : v_(n, d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rational from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        q.canonicalize();
        return Rational(q);
    }

    BigInt num() const { return v_.get_num(); }
    BigInt den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    Rational inverse() const {
        if (is_zero()) throw std::domain_error("Rational: inverse of zero");
        return Rational(mpq_class(1) / v_);
    }

    Rational pow(long e) const {
        if (e == 0) return Rational(1);
        mpq_class base = e > 0 ? v_ : mpq_class(1) / v_;
        unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
        mpq_class num, den;
        mpz_pow_ui(num.get_num_mpz_t(), base.get_num_mpz_t(), k);
        mpz_pow_ui(den.get_num_mpz_t(), base.get_den_mpz_t(), k);
        return Rational(num.get_num(), den.get_num());
    }

    // Fractional part in [0,1).
    Rational frac() const {
        BigInt q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return Rational(r, den());
    }

    // "p/q", or just "p" for integers (mpq convention).
    std::string str() const { return v_.get_str(); }

    double to_double() const { return v_.get_d(); }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline Rational gcd(const Rational& a, const Rational& b) {
    // gcd of numerators over lcm of denominators; gcd(0,x) = |x|
    if (a.is_zero()) return b.abs();
    if (b.is_zero()) return a.abs();
    BigInt gn, gd;
    mpz_gcd(gn.get_mpz_t(), a.num().get_mpz_t(), b.num().get_mpz_t());
    mpz_lcm(gd.get_mpz_t(), a.den().get_mpz_t(), b.den().get_mpz_t());
    return Rational(gn, gd);
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Rational pow2(long e) { return Rational(2).pow(e); }

} // namespace itres

#endif
