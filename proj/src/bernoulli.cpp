#include "itres/bernoulli.hpp"

#include <stdexcept>

namespace itres {

namespace {
std::vector<Rational> g_cache;
std::mutex g_mutex;
} // namespace

const Rational& bernoulli(std::size_t m) {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (g_cache.empty()) {
        g_cache.push_back(Rational(1));
        g_cache.push_back(Rational(-1, 2));
    }
    // sum_{j=0}^{m} C(m+1,j) B_j = 0 for m >= 1
    while (g_cache.size() <= m) {
        std::size_t i = g_cache.size();
        Rational acc;
        for (std::size_t j = 0; j < i; ++j)
            acc += Rational(binomial(i + 1, j), BigInt(1)) * g_cache[j];
        g_cache.push_back(-acc / Rational(BigInt(i + 1), BigInt(1)));
    }
    return g_cache[m];
}

Rational zeta_even_over_pi_pow(std::size_t two_m) {
    if (two_m == 0 || two_m % 2 != 0)
        throw std::domain_error("zeta_even_over_pi_pow: argument must be positive even");
    std::size_t m = two_m / 2;
    Rational sign(m % 2 == 1 ? 1 : -1);
    Rational two_pow = pow2(static_cast<long>(two_m));
    return sign * bernoulli(two_m) * two_pow / Rational(2 * factorial(two_m), BigInt(1));
}

Rational eta_even_over_pi_pow(std::size_t s) {
    return (Rational(1) - pow2(1 - static_cast<long>(s))) * zeta_even_over_pi_pow(s);
}

} // namespace itres
