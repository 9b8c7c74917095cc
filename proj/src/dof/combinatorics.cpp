#include "retroalign/dof/combinatorics.hpp"

namespace retroalign::dof {

CombinatoricsCache& CombinatoricsCache::shared() {
    static CombinatoricsCache cache;
    return cache;
}

void CombinatoricsCache::grow_pascal(int n) {
    while (static_cast<int>(pascal_.size()) <= n) {
        const int row = static_cast<int>(pascal_.size());
        std::vector<BigInt> next(row + 1, BigInt(1));
        for (int k = 1; k < row; ++k) next[k] = pascal_[row - 1][k - 1] + pascal_[row - 1][k];
        pascal_.push_back(std::move(next));
    }
}

void CombinatoricsCache::grow_sums(int n) {
    while (static_cast<int>(h_.size()) <= n) {
        const long long l = static_cast<long long>(h_.size());
        h_.push_back(h_.back() + Rational(1, l));
        s2_.push_back(s2_.back() + Rational(1, l * l));
    }
}

BigInt CombinatoricsCache::binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    std::lock_guard lock(mu_);
    grow_pascal(n);
    return pascal_[n][k];
}

Rational CombinatoricsCache::harmonic(int a, int b) {
    if (a < 1) a = 1;
    if (a > b) return 0;
    std::lock_guard lock(mu_);
    grow_sums(b);
    return h_[b] - h_[a - 1];
}

Rational CombinatoricsCache::inverse_squares(int a, int b) {
    if (a < 1) a = 1;
    if (a > b) return 0;
    std::lock_guard lock(mu_);
    grow_sums(b);
    return s2_[b] - s2_[a - 1];
}

BigInt binomial(int n, int k) { return CombinatoricsCache::shared().binomial(n, k); }
Rational harmonic(int a, int b) { return CombinatoricsCache::shared().harmonic(a, b); }
Rational inverse_squares(int a, int b) { return CombinatoricsCache::shared().inverse_squares(a, b); }

} // namespace retroalign::dof
