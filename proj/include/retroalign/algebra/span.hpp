#pragma once

#include "retroalign/algebra/linear_expr.hpp"

#include <cstdint>
#include <queue>
#include <set>
#include <unordered_map>
#include <vector>

namespace retroalign {

template <class F>
class Span;

// Row-echelon basis over GF(2^61 - 1). Columns are symbol indices; the
// leading column of a row is its smallest index.
template <>
class Span<PrimeField> {
public:
    using Expr = LinearExpr<PrimeField>;

    // Adds e; returns true when the rank grew.
    bool insert(const Expr& e);
    bool contains(const Expr& e) const;
    // Remainder of e with every pivot column cleared.
    Expr reduce(const Expr& e) const;

    std::size_t rank() const { return rows_.size(); }
    // Number of basis rows whose leading column is >= col.
    std::size_t pivots_from(std::uint32_t col) const;

private:
    struct Row {
        std::vector<std::uint32_t> col;
        std::vector<std::uint64_t> val;
    };
    enum class Mode { Contains, Insert, Full };

    bool run(const Expr& e, Mode mode, Row* out) const;
    void push(std::uint32_t c) const;
    void drain() const;

    std::vector<Row> rows_;
    std::vector<std::int32_t> pivot_;

    mutable std::vector<std::uint64_t> acc_;
    mutable std::vector<char> queued_;
    mutable std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap_;
};

// Orthonormal basis of complex expressions over compacted columns, built by
// classical Gram-Schmidt with one conditional reorthogonalization pass.
// Membership uses a relative residual tolerance.
template <>
class Span<ComplexField> {
public:
    using Expr = LinearExpr<ComplexField>;
    using value_type = ComplexField::value_type;

    bool insert(const Expr& e);
    bool contains(const Expr& e) const;
    Expr reduce(const Expr& e) const;
    std::size_t rank() const { return re_.size(); }

private:
    struct Residual {
        std::vector<double> re, im;
        std::vector<std::uint32_t> fresh;
        double norm_in = 0, norm_out = 0;
    };

    Residual residual(const Expr& e) const;

    std::unordered_map<std::uint32_t, std::uint32_t> local_;
    std::vector<std::uint32_t> global_;
    std::vector<std::vector<double>> re_, im_;
};

using PrimeSpan = Span<PrimeField>;
using ComplexSpan = Span<ComplexField>;

// Expressions of eqs with the component in span(known) removed.
template <class F>
std::vector<LinearExpr<F>> eliminate(const std::vector<LinearExpr<F>>& known, const std::vector<LinearExpr<F>>& eqs);

// True iff every target is determined by span(eqs + known).
template <class F>
bool decodable(const std::vector<LinearExpr<F>>& eqs, const std::vector<LinearExpr<F>>& known,
               const std::set<SymbolId>& targets);

} // namespace retroalign
