#include "retroalign/algebra/span.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace retroalign {

using P = PrimeField;

void Span<P>::push(std::uint32_t c) const {
    if (c >= acc_.size()) {
        acc_.resize(c + 1, 0);
        queued_.resize(c + 1, 0);
    }
    if (!queued_[c]) {
        queued_[c] = 1;
        heap_.push(c);
    }
}

void Span<P>::drain() const {
    while (!heap_.empty()) {
        std::uint32_t c = heap_.top();
        heap_.pop();
        queued_[c] = 0;
        acc_[c] = 0;
    }
}

bool Span<P>::run(const Expr& e, Mode mode, Row* out) const {
    for (const auto& t : e.terms()) {
        push(t.id.index);
        acc_[t.id.index] = t.coeff;
    }
    while (!heap_.empty()) {
        const std::uint32_t c = heap_.top();
        heap_.pop();
        queued_[c] = 0;
        const std::uint64_t v = acc_[c];
        if (v == 0) continue;
        acc_[c] = 0;
        const std::int32_t p = c < pivot_.size() ? pivot_[c] : -1;
        if (p >= 0) {
            const Row& row = rows_[p];
            const std::uint64_t f = P::neg(v);
            for (std::size_t k = 1; k < row.col.size(); ++k) {
                const std::uint32_t q = row.col[k];
                push(q);
                acc_[q] = P::add(acc_[q], P::mul(f, row.val[k]));
            }
            continue;
        }
        if (mode == Mode::Contains) {
            drain();
            return false;
        }
        out->col.push_back(c);
        out->val.push_back(v);
        if (mode == Mode::Insert) {
            while (!heap_.empty()) {
                const std::uint32_t q = heap_.top();
                heap_.pop();
                queued_[q] = 0;
                if (acc_[q] != 0) {
                    out->col.push_back(q);
                    out->val.push_back(acc_[q]);
                    acc_[q] = 0;
                }
            }
            return false;
        }
    }
    return mode == Mode::Contains || out->col.empty();
}

bool Span<P>::insert(const Expr& e) {
    Row row;
    run(e, Mode::Insert, &row);
    if (row.col.empty()) return false;
    const std::uint64_t inv = P::inv(row.val[0]);
    for (auto& v : row.val) v = P::mul(v, inv);
    const std::uint32_t lead = row.col[0];
    if (lead >= pivot_.size()) pivot_.resize(lead + 1, -1);
    pivot_[lead] = static_cast<std::int32_t>(rows_.size());
    rows_.push_back(std::move(row));
    return true;
}

bool Span<P>::contains(const Expr& e) const { return run(e, Mode::Contains, nullptr); }

Span<P>::Expr Span<P>::reduce(const Expr& e) const {
    Row row;
    run(e, Mode::Full, &row);
    std::vector<Expr::Term> terms;
    for (std::size_t k = 0; k < row.col.size(); ++k) terms.push_back({SymbolId{row.col[k]}, row.val[k]});
    return Expr::from_terms(std::move(terms));
}

std::size_t Span<P>::pivots_from(std::uint32_t col) const {
    std::size_t n = 0;
    for (const Row& r : rows_) n += r.col[0] >= col;
    return n;
}

using C = ComplexField;

namespace {

double norm2(const std::vector<double>& re, const std::vector<double>& im) {
    double s = 0;
    for (std::size_t k = 0; k < re.size(); ++k) s += re[k] * re[k] + im[k] * im[k];
    return s;
}

} // namespace

// Classical Gram-Schmidt with a second pass when the first one cancels heavily.
Span<C>::Residual Span<C>::residual(const Expr& e) const {
    Residual r;
    const std::size_t width = global_.size();
    r.re.assign(width, 0.0);
    r.im.assign(width, 0.0);
    std::vector<std::pair<std::uint32_t, value_type>> sparse;
    for (const auto& t : e.terms()) {
        auto it = local_.find(t.id.index);
        if (it == local_.end()) {
            r.fresh.push_back(t.id.index);
            r.re.push_back(t.coeff.real());
            r.im.push_back(t.coeff.imag());
        } else {
            r.re[it->second] = t.coeff.real();
            r.im[it->second] = t.coeff.imag();
            sparse.emplace_back(it->second, t.coeff);
        }
    }
    r.norm_in = std::sqrt(norm2(r.re, r.im));
    const std::size_t n = re_.size();
    std::vector<double> dre(n), dim(n);
    for (std::size_t b = 0; b < n; ++b) {
        const auto& qr = re_[b];
        const auto& qi = im_[b];
        double sr = 0, si = 0;
        for (const auto& [k, v] : sparse) {
            if (k >= qr.size()) continue;
            sr += qr[k] * v.real() + qi[k] * v.imag();
            si += qr[k] * v.imag() - qi[k] * v.real();
        }
        dre[b] = sr;
        dim[b] = si;
    }
    auto subtract = [&] {
        for (std::size_t b = 0; b < n; ++b) {
            const auto& qr = re_[b];
            const auto& qi = im_[b];
            const double sr = dre[b], si = dim[b];
            if (sr == 0 && si == 0) continue;
            double* rr = r.re.data();
            double* ri = r.im.data();
            for (std::size_t k = 0; k < qr.size(); ++k) {
                rr[k] -= sr * qr[k] - si * qi[k];
                ri[k] -= sr * qi[k] + si * qr[k];
            }
        }
    };
    subtract();
    double after = std::sqrt(norm2(r.re, r.im));
    if (n > 0 && after < r.norm_in / std::sqrt(2.0)) {
        for (std::size_t b = 0; b < n; ++b) {
            const auto& qr = re_[b];
            const auto& qi = im_[b];
            const double* rr = r.re.data();
            const double* ri = r.im.data();
            double sr = 0, si = 0;
            for (std::size_t k = 0; k < qr.size(); ++k) {
                sr += qr[k] * rr[k] + qi[k] * ri[k];
                si += qr[k] * ri[k] - qi[k] * rr[k];
            }
            dre[b] = sr;
            dim[b] = si;
        }
        subtract();
        after = std::sqrt(norm2(r.re, r.im));
    }
    r.norm_out = after;
    return r;
}

bool Span<C>::insert(const Expr& e) {
    Residual r = residual(e);
    if (r.norm_in == 0 || r.norm_out <= C::rank_tol * r.norm_in) return false;
    for (std::uint32_t g : r.fresh) {
        local_.emplace(g, static_cast<std::uint32_t>(global_.size()));
        global_.push_back(g);
    }
    for (auto& v : r.re) v /= r.norm_out;
    for (auto& v : r.im) v /= r.norm_out;
    re_.push_back(std::move(r.re));
    im_.push_back(std::move(r.im));
    return true;
}

bool Span<C>::contains(const Expr& e) const {
    const Residual r = residual(e);
    return r.norm_in == 0 || r.norm_out <= C::rank_tol * r.norm_in;
}

Span<C>::Expr Span<C>::reduce(const Expr& e) const {
    const Residual r = residual(e);
    std::vector<Expr::Term> terms;
    for (std::size_t k = 0; k < r.re.size(); ++k) {
        const value_type v{r.re[k], r.im[k]};
        if (std::abs(v) < C::prune_tol) continue;
        const std::uint32_t g = k < global_.size() ? global_[k] : r.fresh[k - global_.size()];
        terms.push_back({SymbolId{g}, v});
    }
    return Expr::from_terms(std::move(terms));
}

template <class F>
std::vector<LinearExpr<F>> eliminate(const std::vector<LinearExpr<F>>& known, const std::vector<LinearExpr<F>>& eqs) {
    Span<F> span;
    for (const auto& k : known) span.insert(k);
    std::vector<LinearExpr<F>> out;
    out.reserve(eqs.size());
    for (const auto& e : eqs) out.push_back(span.reduce(e));
    return out;
}

namespace {

// Relabels symbols so non-targets come first, then targets.
struct Relabel {
    std::map<SymbolId, std::uint32_t> local;
    std::uint32_t non_targets = 0;
};

template <class F>
Relabel relabel(const std::vector<const LinearExpr<F>*>& rows, const std::set<SymbolId>& targets) {
    std::set<SymbolId> others;
    for (const auto* r : rows)
        for (const auto& t : r->terms())
            if (!targets.count(t.id)) others.insert(t.id);
    Relabel rl;
    for (SymbolId s : others) rl.local[s] = rl.non_targets++;
    std::uint32_t next = rl.non_targets;
    for (SymbolId s : targets) rl.local[s] = next++;
    return rl;
}

int svd_rank(const Eigen::MatrixXcd& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) r += s(k) >= C::rank_tol * s(0);
    return r;
}

} // namespace

template <>
bool decodable<P>(const std::vector<LinearExpr<P>>& eqs, const std::vector<LinearExpr<P>>& known,
                  const std::set<SymbolId>& targets) {
    if (targets.empty()) return true;
    std::vector<const LinearExpr<P>*> rows;
    for (const auto& e : known) rows.push_back(&e);
    for (const auto& e : eqs) rows.push_back(&e);
    const Relabel rl = relabel<P>(rows, targets);
    Span<P> span;
    for (const auto* r : rows) {
        std::vector<LinearExpr<P>::Term> terms;
        terms.reserve(r->size());
        for (const auto& t : r->terms()) terms.push_back({SymbolId{rl.local.at(t.id)}, t.coeff});
        span.insert(LinearExpr<P>::from_terms(std::move(terms)));
    }
    return span.pivots_from(rl.non_targets) == targets.size();
}

template <>
bool decodable<C>(const std::vector<LinearExpr<C>>& eqs, const std::vector<LinearExpr<C>>& known,
                  const std::set<SymbolId>& targets) {
    if (targets.empty()) return true;
    std::vector<const LinearExpr<C>*> rows;
    for (const auto& e : known) rows.push_back(&e);
    for (const auto& e : eqs) rows.push_back(&e);
    const Relabel rl = relabel<C>(rows, targets);
    const Eigen::Index ncols = static_cast<Eigen::Index>(rl.local.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), ncols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& t : rows[i]->terms()) a(static_cast<Eigen::Index>(i), rl.local.at(t.id)) = t.coeff;
    const int full = svd_rank(a);
    const int others = svd_rank(a.leftCols(rl.non_targets));
    return full - others == static_cast<int>(targets.size());
}

template std::vector<LinearExpr<P>> eliminate<P>(const std::vector<LinearExpr<P>>&, const std::vector<LinearExpr<P>>&);
template std::vector<LinearExpr<C>> eliminate<C>(const std::vector<LinearExpr<C>>&, const std::vector<LinearExpr<C>>&);

} // namespace retroalign
