#ifndef ITRES_PAIRING_HPP
#define ITRES_PAIRING_HPP

#include "itres/expr.hpp"
#include "itres/sudata.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace itres {

enum class Route { mainab, t96b, eq936, binverse_check };

std::string route_name(Route r);
std::optional<Route> route_from_name(const std::string& s);

// A pairing request: intersection numbers of products of the standard
// generators against the fundamental class, with exp(f_2) always included.
struct PairingSpec {
    std::size_t n = 2;
    long d = 1;
    unsigned g = 2;
    std::map<std::size_t, unsigned> a_exp;                  // r -> m_r, 2 <= r <= n
    std::map<std::size_t, unsigned> f_exp;                  // r -> n_r, 3 <= r <= n
    std::vector<std::pair<std::size_t, unsigned>> b_idx;    // (r, j), 1 <= j <= 2g
    std::optional<Rational> epsilon;

    void validate() const; // throws std::invalid_argument

    // degree accounting: deg a_r = 2r, deg f_r = 2r-2, deg b_r^j = 2r-1
    unsigned class_degree() const;
    unsigned moduli_dimension() const; // real dimension 2(n^2-1)(g-1)

    std::vector<unsigned> jet_caps() const; // caps for delta_3..delta_n
};

struct PairingResult {
    Rational value;
    Route route = Route::mainab;
    // provenance
    std::string residue_order;
    std::vector<unsigned> jet_caps;
    int b_sign = 1;
    bool top_degree = false;
    std::vector<std::string> notes;
};

// The perturbed invariant polynomial tau_2 + sum_r delta_r tau_r over the
// jet ring with the given caps (caps.size() == n-2).
struct QPolynomial {
    std::size_t n = 2;
    std::vector<unsigned> caps;
    PolyJ q;

    static QPolynomial standard(std::size_t n, std::vector<unsigned> caps);
};

// Pure a-class pairings (with exp f_2).
PairingResult pairing_a(const PairingSpec& spec);

// a- and f-classes via the jet route; the value is the requested
// delta-multidegree coefficient times prod n_r!.
PairingResult pairing_f(const PairingSpec& spec);

// b-classes via T_{rs} insertions; unpaired index sets give exact 0.
PairingResult pairing_b(const PairingSpec& spec);

// Evaluation with the symplectic form scaled by a nonzero rational; for
// top-degree classes the result is independent of epsilon.
PairingResult epsilon_scaled_pairing(const PairingSpec& spec, const Rational& eps);

// Front-end dispatcher honoring an explicit route request.
PairingResult pairing_dispatch(const PairingSpec& spec, std::optional<Route> route);

// T_{rs}(-X) as a polynomial over the jet ring (trivial denominator).
RatFuncJ t_rs(std::size_t n, std::size_t r, std::size_t s, const QPolynomial& q);

// Both sides of the change-of-variables identity: the direct jet-route
// integral of tau exp(f_q) against the substitution route through B^{-1}
// with exp f_2. Exact jets on both sides.
struct BInverseReport {
    bool equal = false;
    Jet lhs, rhs;
};
BInverseReport binverse_identity_check(std::size_t n, long d, unsigned g,
                                       const std::map<std::size_t, unsigned>& a_exp,
                                       const std::vector<unsigned>& caps);

// Generating jet in a nilpotent scale parameter: coefficient of eps^k is
// (class * f_2^k / k!)[M]. Used to isolate single f_2 powers.
Jet pairing_a_eps_jet(const PairingSpec& spec, unsigned eps_cap);

// Integrand builders, exposed for golden/structure tests.
ExprQ integrand_mainab(const PairingSpec& spec);
ExprQ integrand_remark_a(const PairingSpec& spec);
ExprJ integrand_t96b(const PairingSpec& spec);

// Shared Weyl-summed phase/euler skeleton over varpi^{2g-2}: one term per
// Weyl element with exponential coefficients c_phase * [[w c~]] and euler
// factors (e^{c_euler Y_j} - 1)^{-1}. No prefactor applied.
ExprQ weyl_phase_expression(std::size_t n, long d, unsigned g, const PolyQ& numerator,
                            const Rational& c_phase, const Rational& c_euler);

// Global sign convention for the b-sector, fixed by the genus-reduction
// audit; applied once per symplectic pair.
int b_sector_sign();

} // namespace itres

#endif
