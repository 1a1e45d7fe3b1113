#ifndef ITRES_VERLINDE_HPP
#define ITRES_VERLINDE_HPP

#include "itres/rational.hpp"

#include <cstddef>
#include <string>

namespace itres {

struct VerlindeSpec {
    std::size_t n = 2;
    long d = 1;
    unsigned g = 2;
    unsigned long k = 0; // level; must be divisible by n

    unsigned long r() const { return k + static_cast<unsigned long>(n); }
    void validate() const; // throws std::invalid_argument
};

// Exact dimension via the iterated-residue route; an integer for valid specs.
Rational verlinde_residue_D(const VerlindeSpec& spec);

// Finite sine sum evaluated in floating point (long double up to 18 digits,
// 50-digit binary floats beyond). Returns the value as a decimal string and
// fills `approx`. Throws if the imaginary part fails to cancel.
std::string verlinde_sum_V(const VerlindeSpec& spec, unsigned digits, double& approx);

struct VerlindeReport {
    Rational D;
    std::string V;
    double V_approx = 0.0;
    bool integral = false;
    bool nonneg = false;
    bool agree = false; // |V - D| < 1e-9 * max(1, |D|)
    double rel_err = 0.0;

    bool pass() const { return integral && nonneg && agree; }
};

VerlindeReport verlinde_check(const VerlindeSpec& spec, unsigned digits = 50);

} // namespace itres

#endif
