#include "itres/sudata.hpp"

#include <numeric>
#include <stdexcept>

namespace itres {

int WeylElement::sign() const {
    std::vector<bool> seen(perm.size(), false);
    int s = 1;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = perm[j];
            ++len;
        }
        if (len % 2 == 0) s = -s;
    }
    return s;
}

RootSystem::RootSystem(std::size_t n) : n_(n) {
    if (n < 1) throw std::invalid_argument("RootSystem: n >= 1 required");
    const std::size_t r = n - 1;
    e_.resize(r);
    w_.resize(r);
    for (std::size_t j = 0; j < r; ++j) {
        e_[j].assign(n, Rational(0));
        e_[j][j] = Rational(1);
        e_[j][j + 1] = Rational(-1);
        w_[j].assign(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            w_[j][i] = (i <= j ? Rational(1) : Rational(0)) -
                       Rational(static_cast<long>(j) + 1, static_cast<long>(n));
        }
    }
    gram_.assign(r, std::vector<Rational>(r));
    gram_inv_.assign(r, std::vector<Rational>(r));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            gram_[a][b] = inner(e_[a], e_[b]);
            gram_inv_[a][b] = inner(w_[a], w_[b]); // dual basis pairing
        }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            proots_.emplace_back(j, k);
            std::vector<Rational> c(r, Rational(0));
            for (std::size_t t = j; t < k; ++t) c[t] = Rational(1);
            proot_forms_.push_back(PolyQ::linear_form(c));
        }
    x_from_y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rational> c(r, Rational(0));
        for (std::size_t j = 0; j < r; ++j) {
            if (j >= i) c[j] += Rational(1);
            c[j] -= Rational(static_cast<long>(j) + 1, static_cast<long>(n));
        }
        x_from_y_[i] = PolyQ::linear_form(c);
    }
}

Rational RootSystem::inner(const std::vector<Rational>& a,
                           const std::vector<Rational>& b) const {
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<Rational> RootSystem::root_dual(std::size_t idx) const {
    auto [j, k] = proots_[idx];
    std::vector<Rational> v(n_, Rational(0));
    v[j] = Rational(1);
    v[k] = Rational(-1);
    return v;
}

std::vector<Rational> RootSystem::point_vector(const TorusPoint& p) const {
    std::vector<Rational> v(n_, Rational(0));
    for (std::size_t j = 0; j < p.coeff.size(); ++j)
        for (std::size_t i = 0; i < n_; ++i) v[i] += p.coeff[j] * e_[j][i];
    return v;
}

TorusPoint RootSystem::point_from_vector(const std::vector<Rational>& v) const {
    TorusPoint p;
    p.coeff.resize(n_ - 1);
    for (std::size_t j = 0; j + 1 < n_; ++j) p.coeff[j] = inner(v, w_[j]);
    return p;
}

std::vector<Rational> RootSystem::point_y_coords(const TorusPoint& p) const {
    std::vector<Rational> v = point_vector(p);
    std::vector<Rational> y(n_ - 1);
    for (std::size_t j = 0; j + 1 < n_; ++j) y[j] = inner(v, e_[j]);
    return y;
}

TorusPoint RootSystem::weyl_apply(const WeylElement& w, const TorusPoint& p) const {
    // dual action: <w*v, X> = <v, wX> where (wX)_i = X_{perm[i]}
    std::vector<Rational> v = point_vector(p);
    std::vector<Rational> u(n_);
    for (std::size_t i = 0; i < n_; ++i) u[w.perm[i]] = v[i];
    // u_{perm[i]} = v_i, i.e. u_j = v_{perm^{-1}(j)}
    return point_from_vector(u);
}

PolyQ RootSystem::weyl_apply_poly(const WeylElement& w, const PolyQ& poly) const {
    const std::size_t r = n_ - 1;
    std::vector<PolyQ> images(r);
    for (std::size_t j = 0; j < r; ++j) {
        std::size_t a = w.perm[j], b = w.perm[j + 1];
        std::vector<Rational> c(r, Rational(0));
        if (a < b)
            for (std::size_t t = a; t < b; ++t) c[t] = Rational(1);
        else
            for (std::size_t t = b; t < a; ++t) c[t] = Rational(-1);
        images[j] = PolyQ::linear_form(c);
    }
    return poly.subst(images, r);
}

TorusPoint bracket(const TorusPoint& p) {
    TorusPoint q;
    q.coeff.reserve(p.coeff.size());
    for (const auto& c : p.coeff) q.coeff.push_back(c.frac());
    return q;
}

TorusPoint tilde_c(std::size_t n, long d) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), BigInt(static_cast<long>(n)).get_mpz_t(), BigInt(d).get_mpz_t());
    if (g != 1) throw std::invalid_argument("tilde_c: gcd(n,d) must be 1");
    RootSystem rs(n);
    std::vector<Rational> v(n);
    for (std::size_t i = 0; i + 1 < n; ++i) v[i] = Rational(d, static_cast<long>(n));
    v[n - 1] = Rational(-d * (static_cast<long>(n) - 1), static_cast<long>(n));
    return bracket(rs.point_from_vector(v));
}

PolyQ tau_poly(std::size_t n, std::size_t r) {
    if (r < 2 || r > n) throw std::invalid_argument("tau_poly: need 2 <= r <= n");
    RootSystem rs(n);
    // elementary symmetric polynomials of the X_i, built iteratively
    std::vector<PolyQ> e(r + 1, PolyQ::zero(n - 1));
    e[0] = PolyQ::constant(n - 1, Rational(1));
    for (std::size_t i = 0; i < n; ++i) {
        const PolyQ& xi = rs.coordinate_X(i);
        for (std::size_t k = std::min(r, i + 1); k >= 1; --k)
            e[k] += e[k - 1] * xi;
    }
    return e[r];
}

PolyQ varpi_poly(std::size_t n) {
    RootSystem rs(n);
    PolyQ p = PolyQ::constant(n - 1, Rational(1));
    for (std::size_t i = 0; i < rs.num_positive_roots(); ++i) p = p * rs.root_form(i);
    return p;
}

std::vector<WeylElement> weyl_W_n_minus_1(std::size_t n) {
    std::vector<std::size_t> base(n == 0 ? 0 : n - 1);
    std::iota(base.begin(), base.end(), std::size_t{0});
    std::vector<WeylElement> out;
    do {
        WeylElement w;
        w.perm = base;
        w.perm.push_back(n - 1);
        out.push_back(std::move(w));
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

Rational central_phase(std::size_t n, long d, const TorusPoint& lambda) {
    RootSystem rs(n);
    std::vector<Rational> y = rs.point_y_coords(lambda);
    for (const auto& c : y)
        if (!c.is_integer())
            throw std::invalid_argument("central_phase: point not in the weight lattice");
    TorusPoint tc = tilde_c(n, d);
    Rational dot;
    for (std::size_t j = 0; j + 1 < n; ++j) dot += tc.coeff[j] * y[j];
    return (-dot).frac();
}

} // namespace itres
