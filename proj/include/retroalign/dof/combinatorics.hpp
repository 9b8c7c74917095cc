#pragma once

#include "retroalign/rational.hpp"

#include <mutex>
#include <vector>

namespace retroalign::dof {

// Binomials and exact harmonic-type partial sums, memoized.
// Internally synchronized; safe for concurrent callers.
class CombinatoricsCache {
public:
    static CombinatoricsCache& shared();

    BigInt binomial(int n, int k);
    // Sum of 1/l for l in [a, b]; 0 when a > b.
    Rational harmonic(int a, int b);
    // Sum of 1/l^2 for l in [a, b]; 0 when a > b.
    Rational inverse_squares(int a, int b);

private:
    void grow_pascal(int n);
    void grow_sums(int n);

    std::mutex mu_;
    std::vector<std::vector<BigInt>> pascal_;
    std::vector<Rational> h_{Rational(0)};
    std::vector<Rational> s2_{Rational(0)};
};

BigInt binomial(int n, int k);
Rational harmonic(int a, int b);
Rational inverse_squares(int a, int b);

} // namespace retroalign::dof
