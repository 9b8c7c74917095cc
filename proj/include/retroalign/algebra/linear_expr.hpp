#pragma once

#include "retroalign/algebra/field.hpp"
#include "retroalign/algebra/symbol.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace retroalign {

// Sparse combination of fresh symbols, sorted by id, no stored zeros.
template <class F>
class LinearExpr {
public:
    using value_type = typename F::value_type;
    struct Term {
        SymbolId id;
        value_type coeff;
    };

    LinearExpr() = default;

    static LinearExpr unit(SymbolId id) {
        LinearExpr e;
        e.terms_.push_back({id, F::one()});
        return e;
    }
    static LinearExpr from_terms(std::vector<Term> terms) {
        std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.id < b.id; });
        LinearExpr e;
        for (const Term& t : terms) {
            if (!e.terms_.empty() && e.terms_.back().id == t.id)
                e.terms_.back().coeff = F::add(e.terms_.back().coeff, t.coeff);
            else
                e.terms_.push_back(t);
        }
        e.prune();
        return e;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    value_type coefficient(SymbolId id) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), id, [](const Term& t, SymbolId s) { return t.id < s; });
        return it != terms_.end() && it->id == id ? it->coeff : F::zero();
    }

    // this += c * other
    LinearExpr& add_scaled(const LinearExpr& other, value_type c) {
        if (F::is_zero(c) || other.terms_.empty()) return *this;
        std::vector<Term> out;
        out.reserve(terms_.size() + other.terms_.size());
        auto a = terms_.begin();
        auto b = other.terms_.begin();
        while (a != terms_.end() || b != other.terms_.end()) {
            if (b == other.terms_.end() || (a != terms_.end() && a->id < b->id)) {
                out.push_back(*a++);
            } else if (a == terms_.end() || b->id < a->id) {
                value_type v = F::mul(c, b->coeff);
                if (!F::is_zero(v)) out.push_back({b->id, v});
                ++b;
            } else {
                value_type v = F::add(a->coeff, F::mul(c, b->coeff));
                if (!F::is_zero(v)) out.push_back({a->id, v});
                ++a;
                ++b;
            }
        }
        terms_ = std::move(out);
        return *this;
    }

    LinearExpr scaled(value_type c) const {
        LinearExpr e;
        if (F::is_zero(c)) return e;
        e.terms_.reserve(terms_.size());
        for (const Term& t : terms_) {
            value_type v = F::mul(c, t.coeff);
            if (!F::is_zero(v)) e.terms_.push_back({t.id, v});
        }
        return e;
    }

    friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a.add_scaled(b, F::one()); }
    friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a.add_scaled(b, F::neg(F::one())); }

    friend bool operator==(const LinearExpr& a, const LinearExpr& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].id != b.terms_[i].id || !F::is_zero(F::sub(a.terms_[i].coeff, b.terms_[i].coeff))) return false;
        return true;
    }

private:
    void prune() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return F::is_zero(t.coeff); }),
                     terms_.end());
    }

    std::vector<Term> terms_;
};

// sum_k coeffs[k] * exprs[k]
template <class F>
LinearExpr<F> combine(const std::vector<LinearExpr<F>>& exprs, const std::vector<typename F::value_type>& coeffs) {
    LinearExpr<F> out;
    for (std::size_t k = 0; k < exprs.size() && k < coeffs.size(); ++k) out.add_scaled(exprs[k], coeffs[k]);
    return out;
}

using PrimeExpr = LinearExpr<PrimeField>;
using ComplexExpr = LinearExpr<ComplexField>;

} // namespace retroalign
