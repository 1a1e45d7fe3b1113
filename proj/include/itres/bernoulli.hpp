#ifndef ITRES_BERNOULLI_HPP
#define ITRES_BERNOULLI_HPP

#include "itres/rational.hpp"

#include <cstddef>
#include <mutex>
#include <vector>

namespace itres {

// Bernoulli numbers in the convention t/(e^t-1) = sum B_m t^m / m!,
// so B_1 = -1/2. Cached; thread-safe.
const Rational& bernoulli(std::size_t m);

// Riemann zeta at positive even integers:
// zeta(2m) = (-1)^{m+1} B_{2m} (2pi)^{2m} / (2 (2m)!), returned as the
// rational multiplier of pi^{2m}.
Rational zeta_even_over_pi_pow(std::size_t two_m);

// Dirichlet eta(s) = (1 - 2^{1-s}) zeta(s) for positive even s, as the
// rational multiplier of pi^s. eta(0) = 1/2 is handled by callers that
// opt into Abel regularization.
Rational eta_even_over_pi_pow(std::size_t s);

} // namespace itres

#endif
