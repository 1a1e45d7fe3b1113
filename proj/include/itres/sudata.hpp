#ifndef ITRES_SUDATA_HPP
#define ITRES_SUDATA_HPP

#include "itres/poly.hpp"

#include <cstddef>
#include <vector>

namespace itres {

// Point of the Cartan subalgebra of su(n), stored by its coefficients in the
// simple-root basis (the natural chart for the fractional-part reduction).
struct TorusPoint {
    std::vector<Rational> coeff; // v = sum coeff[j] * e_j

    std::size_t rank() const { return coeff.size(); }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        return a.coeff == b.coeff;
    }
};

// Permutation w of the coordinates X_1..X_n; perm[i] = w(i) (0-based).
// Elements of the subgroup used in the residue formulas fix the last
// coordinate.
struct WeylElement {
    std::vector<std::size_t> perm;

    bool is_identity() const {
        for (std::size_t i = 0; i < perm.size(); ++i)
            if (perm[i] != i) return false;
        return true;
    }
    int sign() const;
};

// All SU(n) combinatorial data in the trace-zero R^n chart with the Euclidean
// inner product, plus the residue coordinates Y_j = X_j - X_{j+1}.
class RootSystem {
public:
    explicit RootSystem(std::size_t n);

    std::size_t n() const { return n_; }
    std::size_t rank() const { return n_ - 1; }
    std::size_t num_positive_roots() const { return n_ * (n_ - 1) / 2; }

    // vectors in R^n (trace zero)
    const std::vector<Rational>& simple_root(std::size_t j) const { return e_[j]; }
    const std::vector<Rational>& fund_weight(std::size_t j) const { return w_[j]; }

    // Cartan matrix <e_a, e_b>
    const std::vector<std::vector<Rational>>& gram() const { return gram_; }
    const std::vector<std::vector<Rational>>& gram_inverse() const { return gram_inv_; }

    // positive roots as index pairs (j,k), j<k, with root form X_j - X_k
    const std::vector<std::pair<std::size_t, std::size_t>>& positive_roots() const {
        return proots_;
    }
    // Y_j + ... + Y_{k-1} for the positive root (j,k)
    const PolyQ& root_form(std::size_t idx) const { return proot_forms_[idx]; }

    // X_i as a linear polynomial in Y_1..Y_{n-1}
    const PolyQ& coordinate_X(std::size_t i) const { return x_from_y_[i]; }

    // inner-product dual of the positive root (j,k): the vector e_j - e_k
    std::vector<Rational> root_dual(std::size_t idx) const;

    std::vector<Rational> point_vector(const TorusPoint& p) const;
    TorusPoint point_from_vector(const std::vector<Rational>& v) const;

    // Y-coordinates of a point: Y_j(v) = <v, e_j>
    std::vector<Rational> point_y_coords(const TorusPoint& p) const;

    Rational inner(const std::vector<Rational>& a, const std::vector<Rational>& b) const;

    TorusPoint weyl_apply(const WeylElement& w, const TorusPoint& p) const;

    // Substitute the w-action into a polynomial in Y-coordinates:
    // (result)(X) = poly(w X).
    PolyQ weyl_apply_poly(const WeylElement& w, const PolyQ& poly) const;

private:
    std::size_t n_;
    std::vector<std::vector<Rational>> e_, w_;
    std::vector<std::vector<Rational>> gram_, gram_inv_;
    std::vector<std::pair<std::size_t, std::size_t>> proots_;
    std::vector<PolyQ> proot_forms_;
    std::vector<PolyQ> x_from_y_;
};

// Componentwise fractional part in the simple-root chart.
TorusPoint bracket(const TorusPoint& p);

// The distinguished logarithm of the central element exp(2 pi i d/n) Id,
// reduced into the fundamental domain. Requires gcd(n,d) = 1.
TorusPoint tilde_c(std::size_t n, long d);

// Elementary symmetric polynomial tau_r(X_1..X_n) in Y-coordinates, 2<=r<=n.
PolyQ tau_poly(std::size_t n, std::size_t r);

// Product of the positive roots in Y-coordinates.
PolyQ varpi_poly(std::size_t n);

// The (n-1)! permutations of X_1..X_n fixing X_n.
std::vector<WeylElement> weyl_W_n_minus_1(std::size_t n);

// Exact angle a in [0,1) with c^{-lambda} = e^{2 pi i a}; lambda must lie in
// the weight lattice (integral Y-coordinates).
Rational central_phase(std::size_t n, long d, const TorusPoint& lambda);

} // namespace itres

#endif
