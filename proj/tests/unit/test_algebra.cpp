#include "doctest.h"

#include "retroalign/algebra/random.hpp"
#include "retroalign/algebra/span.hpp"
#include "retroalign/algebra/symbol.hpp"
#include "retroalign/rational.hpp"

#include <random>

using namespace retroalign;

namespace {

using P = PrimeField;
using PE = LinearExpr<P>;
using CE = LinearExpr<ComplexField>;

SymbolId S(std::uint32_t i) { return SymbolId{i}; }

PE row(std::initializer_list<long long> coeffs) {
    std::vector<PE::Term> t;
    std::uint32_t k = 0;
    for (long long c : coeffs) t.push_back({S(k++), P::from_int(c)});
    return PE::from_terms(std::move(t));
}

int rational_rank(std::vector<std::vector<Rational>> a) {
    int rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(a.size()); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == Rational(0)) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == static_cast<std::size_t>(rank) || a[r][c] == Rational(0)) continue;
            const Rational f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Targets are decodable iff dropping their columns loses exactly |T| rank.
bool rational_decodable(const std::vector<std::vector<long long>>& m, const std::set<int>& targets) {
    std::vector<std::vector<Rational>> full, rest;
    for (const auto& r : m) {
        std::vector<Rational> f, n;
        for (std::size_t k = 0; k < r.size(); ++k) {
            f.emplace_back(r[k]);
            if (!targets.count(static_cast<int>(k))) n.emplace_back(r[k]);
        }
        full.push_back(f);
        rest.push_back(n);
    }
    return rational_rank(full) - rational_rank(rest) == static_cast<int>(targets.size());
}

} // namespace

TEST_CASE("symbol pool mints disjoint ids") {
    SymbolPool pool;
    const auto a = pool.mint_fresh(2, 1, 1);
    CHECK(a.size() == 2);
    CHECK(pool.info(a[0]).owner_tx == 1);
    CHECK(pool.info(a[1]).intended_rx == 1);
    CHECK(pool.mint_fresh(0, 0, 0).empty());
    const auto b = pool.mint_fresh(3, 0, 2);
    for (auto x : a)
        for (auto y : b) CHECK(x != y);
    CHECK(pool.size() == 5);
}

TEST_CASE("random coefficient streams") {
    RngStream s1 = make_stream(9, Stream::Offline), s2 = make_stream(9, Stream::Offline);
    const auto a = random_coeffs<P>(5, s1), b = random_coeffs<P>(5, s2);
    CHECK(a.size() == 5);
    CHECK(a == b);
    RngStream s3 = make_stream(9, Stream::Channel);
    CHECK(random_coeffs<P>(5, s3) != a);
    RngStream big = make_stream(4, Stream::Synthetic);
    for (auto v : random_coeffs<P>(2000, big)) {
        CHECK(v != 0);
        CHECK(v < P::modulus);
    }
}

TEST_CASE("prime field arithmetic") {
    const auto a = P::from_int(-5);
    CHECK(P::add(a, 5) == 0);
    CHECK(P::mul(P::inv(a), a) == 1);
    CHECK(P::mul(P::modulus - 1, P::modulus - 1) == 1);
    CHECK(P::pow(2, 61) == 1);
}

TEST_CASE("linear expressions stay sorted and pruned") {
    const PE x = PE::unit(S(3)), y = PE::unit(S(1));
    const PE s = x + y;
    REQUIRE(s.size() == 2);
    CHECK(s.terms()[0].id == S(1));
    CHECK((s - x - y).is_zero());
    CHECK(s.coefficient(S(3)) == 1);
    CHECK(s.coefficient(S(7)) == 0);
    CHECK(s.scaled(0).is_zero());
    CHECK(combine<P>({x, y}, {2, 3}).coefficient(S(1)) == 3);
}

TEST_CASE("eliminate removes the known span") {
    const PE x = PE::unit(S(0)), y = PE::unit(S(1)), z = PE::unit(S(2));
    auto out = eliminate<P>({x + y}, {x + y + z});
    REQUIRE(out.size() == 1);
    Span<P> zspan;
    zspan.insert(z);
    CHECK(zspan.contains(out[0]));
    CHECK(!out[0].is_zero());

    const std::vector<PE> eqs = {x + y, row({1, 2, 3})};
    CHECK(eliminate<P>({}, eqs) == eqs);

    for (const auto& e : eliminate<P>({x, y, z}, eqs)) CHECK(e.is_zero());
}

TEST_CASE("eliminate is idempotent") {
    RngStream rng = make_stream(17, Stream::Synthetic);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<PE> known, eqs;
        for (int r = 0; r < 3; ++r) {
            std::vector<PE::Term> t;
            for (std::uint32_t k = 0; k < 6; ++k)
                if (rng() % 2) t.push_back({S(k), P::random_nonzero(rng)});
            known.push_back(PE::from_terms(t));
        }
        for (int r = 0; r < 4; ++r) {
            std::vector<PE::Term> t;
            for (std::uint32_t k = 0; k < 6; ++k) t.push_back({S(k), P::random_nonzero(rng)});
            eqs.push_back(PE::from_terms(t));
        }
        const auto once = eliminate<P>(known, eqs);
        const auto twice = eliminate<P>(known, once);
        Span<P> a, b;
        for (const auto& e : once) a.insert(e);
        for (const auto& e : twice) b.insert(e);
        CHECK(a.rank() == b.rank());
        for (const auto& e : twice) CHECK(a.contains(e));
    }
}

TEST_CASE("decodable basic cases") {
    std::set<SymbolId> t01 = {S(0), S(1)};
    CHECK(decodable<P>({PE::unit(S(0)), PE::unit(S(1))}, {}, t01));
    CHECK(!decodable<P>({row({1, 1})}, {}, t01));
    CHECK(decodable<P>({row({1, 1})}, {PE::unit(S(1))}, t01));
    CHECK(decodable<P>({}, {}, {}));
    // Interference aligned in one dimension does not block the target.
    CHECK(decodable<P>({row({1, 1, 1}), row({0, 2, 2})}, {}, {S(0)}));
    CHECK(!decodable<P>({row({1, 1, 1}), row({0, 2, 3})}, {}, {S(0), S(1)}));
}

TEST_CASE("decodable matches a 3x3 determinant") {
    RngStream rng = make_stream(5, Stream::Synthetic);
    std::uniform_int_distribution<int> small(-2, 2);
    for (int trial = 0; trial < 300; ++trial) {
        // Alternate generic entries with small integers so singular cases occur.
        const bool generic = trial % 2 == 0;
        P::value_type m[3][3];
        std::vector<PE> eqs;
        for (int r = 0; r < 3; ++r) {
            std::vector<PE::Term> t;
            for (int c = 0; c < 3; ++c) {
                m[r][c] = generic ? P::random_nonzero(rng) : P::from_int(small(rng));
                t.push_back({S(static_cast<std::uint32_t>(c)), m[r][c]});
            }
            eqs.push_back(PE::from_terms(t));
        }
        auto minor = [&](int a, int b, int c, int d) { return P::sub(P::mul(m[1][a], m[2][b]), P::mul(m[1][c], m[2][d])); };
        const auto det = P::add(P::sub(P::mul(m[0][0], minor(1, 2, 2, 1)), P::mul(m[0][1], minor(0, 2, 2, 0))),
                                P::mul(m[0][2], minor(0, 1, 1, 0)));
        CHECK(decodable<P>(eqs, {}, {S(0), S(1), S(2)}) == (det != 0));
    }
}

TEST_CASE("decodable is monotone in equations") {
    RngStream rng = make_stream(6, Stream::Synthetic);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<PE> eqs;
        bool was = false;
        for (int r = 0; r < 6; ++r) {
            std::vector<PE::Term> t;
            for (std::uint32_t k = 0; k < 5; ++k)
                if (rng() % 3 == 0) t.push_back({S(k), P::random_nonzero(rng)});
            eqs.push_back(PE::from_terms(t));
            const bool now = decodable<P>(eqs, {}, {S(0), S(1)});
            CHECK(!(was && !now));
            was = now;
        }
    }
}

TEST_CASE("prime mode agrees with rational elimination on small integers") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> small(-3, 3), dim(1, 5);
    for (int trial = 0; trial < 400; ++trial) {
        const int rows = dim(rng), cols = dim(rng);
        std::vector<std::vector<long long>> m(rows, std::vector<long long>(cols));
        std::vector<PE> eqs;
        for (auto& r : m) {
            std::vector<PE::Term> t;
            for (int k = 0; k < cols; ++k) {
                r[k] = small(rng);
                t.push_back({S(static_cast<std::uint32_t>(k)), P::from_int(r[k])});
            }
            eqs.push_back(PE::from_terms(t));
        }
        std::set<int> ti;
        std::set<SymbolId> ts;
        for (int k = 0; k < cols; ++k)
            if (rng() % 2) {
                ti.insert(k);
                ts.insert(S(static_cast<std::uint32_t>(k)));
            }
        CHECK(decodable<P>(eqs, {}, ts) == rational_decodable(m, ti));
    }
}

TEST_CASE("complex span and decodability") {
    using C = ComplexField;
    const CE x = CE::unit(S(0)), y = CE::unit(S(1)), z = CE::unit(S(2));
    const CE a = x + y.scaled({0, 2}), b = y - z.scaled({3, 1});
    Span<C> s;
    CHECK(s.insert(a));
    CHECK(s.insert(b));
    CHECK(!s.insert(a.scaled({0.5, -1}) + b.scaled({2, 0})));
    CHECK(s.rank() == 2);
    CHECK(s.contains(a + b));
    CHECK(!s.contains(z));
    CHECK(s.reduce(a - b.scaled({7, 0})).is_zero());
    CHECK(decodable<C>({a, b}, {y}, {S(0), S(2)}));
    CHECK(!decodable<C>({a, b}, {}, {S(0), S(1), S(2)}));
    const auto el = eliminate<C>({x + y}, {x + y + z});
    REQUIRE(el.size() == 1);
    Span<C> zs;
    zs.insert(z);
    CHECK(zs.contains(el[0]));
}
