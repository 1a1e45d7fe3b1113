#ifndef ITRES_EXPR_HPP
#define ITRES_EXPR_HPP

#include "itres/ratfunc.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace itres {

// A factor (e^{scale * Y_var} - 1)^{-power}. Always univariate in its own
// variable; the scale is an exact rational.
struct EulerFactor {
    std::size_t var;
    Rational scale;
    unsigned power = 1;

    friend bool operator==(const EulerFactor& a, const EulerFactor& b) {
        return a.var == b.var && a.power == b.power && a.scale == b.scale;
    }
    friend bool operator<(const EulerFactor& a, const EulerFactor& b) {
        if (a.var != b.var) return a.var < b.var;
        if (a.scale != b.scale) return a.scale < b.scale;
        return a.power < b.power;
    }
};

// One summand exp(sum_j expc[j] Y_j) * rat * prod euler_i^{-...}.
template <typename K>
struct ExpTerm {
    std::vector<Rational> expc;
    RatFunc<K> rat;
    std::vector<EulerFactor> euler;

    explicit ExpTerm(std::size_t nvars = 0)
        : expc(nvars, Rational(0)), rat(RatFunc<K>::constant(nvars, Rational(1))) {}

    void sort_euler() { std::sort(euler.begin(), euler.end()); }

    bool same_shape(const ExpTerm& o) const {
        return expc == o.expc && euler == o.euler && rat.den() == o.rat.den();
    }

    friend bool operator<(const ExpTerm& a, const ExpTerm& b) {
        if (a.expc != b.expc) return a.expc < b.expc;
        if (a.euler != b.euler) return a.euler < b.euler;
        if (a.rat.den() != b.rat.den()) return a.rat.den() < b.rat.den();
        return a.rat.num() < b.rat.num();
    }

    std::string str() const {
        std::ostringstream os;
        bool any = false;
        os << "exp(";
        for (std::size_t j = 0; j < expc.size(); ++j) {
            if (expc[j].is_zero()) continue;
            if (any) os << " + ";
            os << "(" << expc[j].str() << ")*Y" << (j + 1);
            any = true;
        }
        if (!any) os << "0";
        os << ") * " << rat.str();
        for (const auto& e : euler)
            os << " / (exp((" << e.scale.str() << ")*Y" << (e.var + 1) << ")-1)^"
               << e.power;
        return os.str();
    }
};

// Canonical finite sum of ExpTerms over variables Y_1..Y_nvars; `live` is the
// number of variables not yet consumed by residues (always a prefix).
template <typename K>
class Expression {
public:
    explicit Expression(std::size_t nvars = 0) : nvars_(nvars), live_(nvars) {}

    std::size_t nvars() const { return nvars_; }
    std::size_t live() const { return live_; }
    void set_live(std::size_t l) { live_ = l; }

    const std::vector<ExpTerm<K>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Adds with structural merging; zero numerators are dropped.
    void add_term(ExpTerm<K> t) {
        if (t.rat.is_zero()) return;
        t.sort_euler();
        for (auto& u : terms_) {
            if (u.same_shape(t)) {
                RatFunc<K> sum(u.rat.num() + t.rat.num(), u.rat.den());
                if (sum.is_zero()) {
                    u = std::move(terms_.back());
                    terms_.pop_back();
                } else {
                    u.rat = std::move(sum);
                }
                return;
            }
        }
        terms_.push_back(std::move(t));
    }

    void add(const Expression& o) {
        for (const auto& t : o.terms_) add_term(t);
    }

    Expression& mul_rational(const Rational& s) {
        if (s.is_zero()) { terms_.clear(); return *this; }
        for (auto& t : terms_) t.rat.mul_rational(s);
        return *this;
    }
    Expression& mul_scalar(const K& s) {
        if (ScalarTraits<K>::is_zero(s)) { terms_.clear(); return *this; }
        for (auto& t : terms_) t.rat.mul_scalar(s);
        prune();
        return *this;
    }
    Expression& mul_poly(const MultiPoly<K>& p) {
        for (auto& t : terms_) t.rat.mul_poly(p);
        prune();
        return *this;
    }

    void sort_terms() { std::sort(terms_.begin(), terms_.end()); }

    // Deterministic dump for golden tests.
    std::string dump() const {
        Expression copy = *this;
        copy.sort_terms();
        std::ostringstream os;
        for (const auto& t : copy.terms_) os << t.str() << "\n";
        return os.str();
    }

private:
    void prune() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                    [](const ExpTerm<K>& t) { return t.rat.is_zero(); }),
                     terms_.end());
    }

    std::size_t nvars_;
    std::size_t live_;
    std::vector<ExpTerm<K>> terms_;
};

using ExprQ = Expression<Rational>;
using ExprJ = Expression<Jet>;

} // namespace itres

#endif
