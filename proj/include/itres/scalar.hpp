#ifndef ITRES_SCALAR_HPP
#define ITRES_SCALAR_HPP

#include "itres/jet.hpp"
#include "itres/rational.hpp"

namespace itres {

// Uniform coefficient-ring interface for the polynomial/expression templates.
// K is Rational or Jet.
template <typename K>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static Rational from_rational(const Rational& r) { return r; }
    static bool is_zero(const Rational& v) { return v.is_zero(); }
    static void mul_rational(Rational& v, const Rational& s) { v *= s; }
    static Rational content(const Rational& v) { return v.abs(); }
    static Rational inverse(const Rational& v) { return v.inverse(); }
    static bool is_invertible(const Rational& v) { return !v.is_zero(); }
    static std::string str(const Rational& v) { return v.str(); }
};

template <>
struct ScalarTraits<Jet> {
    static Jet from_rational(const Rational& r) { return Jet({}, r); }
    static bool is_zero(const Jet& v) { return v.is_zero(); }
    static void mul_rational(Jet& v, const Rational& s) { v.mul_rational(s); }
    static Rational content(const Jet& v) {
        Rational g;
        for (const auto& [d, c] : v.coeffs()) g = gcd(g, c);
        return g;
    }
    static Jet inverse(const Jet& v) { return v.inverse(); }
    static bool is_invertible(const Jet& v) { return !v.constant_part().is_zero(); }
    static std::string str(const Jet& v) { return v.str(); }
};

} // namespace itres

#endif
