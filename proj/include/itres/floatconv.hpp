#ifndef ITRES_FLOATCONV_HPP
#define ITRES_FLOATCONV_HPP

#include "itres/rational.hpp"

#include <cstdlib>
#include <type_traits>

namespace itres {

// Rational -> floating conversion that works for both builtin long double
// and string-constructible multiprecision types.
template <typename F>
F to_float(const Rational& q) {
    if constexpr (std::is_floating_point_v<F>) {
        long double n = std::strtold(q.num().get_str().c_str(), nullptr);
        long double d = std::strtold(q.den().get_str().c_str(), nullptr);
        return static_cast<F>(n / d);
    } else {
        return F(q.num().get_str()) / F(q.den().get_str());
    }
}

} // namespace itres

#endif
