#ifndef ITRES_ORACLES_HPP
#define ITRES_ORACLES_HPP

#include "itres/ratfunc.hpp"

#include <map>
#include <string>
#include <vector>

namespace itres {

struct LatticeSumConfig {
    unsigned long cutoff = 200; // max fundamental-weight coordinate N
    unsigned digits = 18;       // working precision; > 18 switches to 50-digit floats
    double window_tol = 1e-4;   // acceptable relative change between N and 2N
};

struct LatticeSumReport {
    double value = 0.0;      // sum at cutoff 2N
    double value_half = 0.0; // sum at cutoff N
    double window = 0.0;     // |S(2N)-S(N)| / max(|S(2N)|, tiny)
    bool converged = false;
    std::string value_str;
};

// Truncated Witten sum for prod a_r^{m_r} exp(f_2) over regular dominant
// weights. The (2 pi i) powers are pulled out exactly; the remaining complex
// sum must be real up to roundoff.
LatticeSumReport witten_sum(std::size_t n, long d, unsigned g,
                            const std::map<std::size_t, unsigned>& a_exp,
                            const LatticeSumConfig& cfg);

// Built-in test functions g(X) e^{-gamma(X)} for the lattice-sum identity.
struct SzenesFunction {
    std::size_t n;
    std::vector<Rational> gamma; // exponent coefficients, 0 <= gamma_j < 1
    RatFuncQ g;
    std::string desc;
};
const std::vector<SzenesFunction>& szenes_functions();

struct SzenesReport {
    LatticeSumReport lhs;
    Rational rhs;      // exact iterated residue
    double diff = 0.0; // |lhs - rhs|
};
SzenesReport szenes_check(std::size_t fn_id, const LatticeSumConfig& cfg);

// Rank-2 closed form for a_2^j exp(f_2) pairings; the eta(0) = 1/2 case is
// Abel-regularized and flagged.
struct ThaddeusValue {
    Rational value;
    bool regularized = false;
};
ThaddeusValue thaddeus_value(unsigned g, unsigned j);

// Symplectic volume of the rank-2 odd-degree moduli space.
Rational svol_value(unsigned g);

} // namespace itres

#endif
