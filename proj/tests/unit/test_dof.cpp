#include "doctest.h"

#include "retroalign/dof/combinatorics.hpp"
#include "retroalign/dof/dof.hpp"

#include <cmath>
#include <numbers>

using namespace retroalign;
using namespace retroalign::dof;

namespace {
Rational R(long long n, long long d = 1) { return Rational(n, d); }
}

TEST_CASE("rational stays in lowest terms") {
    Rational r(6, -4);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 2);
    CHECK(r.str() == "-3/2");
    CHECK(Rational(7).str() == "7/1");
    CHECK(parse_rational("10/4") == R(5, 2));
    CHECK(R(2, 3).pow(-2) == R(9, 4));
    CHECK(R(1, 3).decimal() == "0.333333333333");
    CHECK_THROWS_AS(R(1) / R(0), std::domain_error);
}

TEST_CASE("combinatorics cache") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(1, 0) == 1);
    CHECK(binomial(3, 4) == 0);
    for (int n = 1; n <= 40; ++n)
        for (int k = 1; k < n; ++k) CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    CHECK(harmonic(1, 4) == R(25, 12));
    CHECK(harmonic(3, 2) == R(0));
    CHECK(inverse_squares(1, 3) == R(49, 36));
    CHECK(inverse_squares(2, 1) == R(0));
}

TEST_CASE("phase parameters") {
    CHECK(q_min(2, 5) == 2);
    CHECK(q_min(5, 6) == 1);
    CHECK(q_min(3, 6) == 3);
    CHECK(l_lcm(2, 5) == 6);
    CHECK(l_lcm(3, 6) == 3);
    CHECK(l_lcm(2, 6) == 4);
    CHECK_THROWS_AS(q_min(0, 5), ParameterError);
    CHECK_THROWS_AS(l_lcm(5, 5), ParameterError);
    // Frozen from tests/oracle/dof_oracle.py.
    CHECK(alpha(2, 5) == 120);
    CHECK(alpha(2, 4) == 8);
    CHECK(alpha(3, 6) == 45);
    CHECK_THROWS_AS(alpha(1, 5), ParameterError);
    CHECK_THROWS_AS(alpha(4, 5), ParameterError);
}

TEST_CASE("full-duplex interference channel") {
    CHECK(dof_icfd_recursive(1, 3).value == R(6, 5));
    CHECK(dof_icfd_recursive(1, 4).value == R(24, 19));
    CHECK(dof_icfd_recursive(4, 5).value == R(5, 4));
    for (int K = 3; K <= 9; ++K) CHECK(dof_icfd_recursive(K - 1, K).value == R(K, K - 1));
    CHECK(dof_icfd_closed(3).value == R(6, 5));
    CHECK(dof_icfd_closed(4).value == R(24, 19));
    CHECK(dof_icfd_closed(5).value == R(240, 187));
    CHECK(dof_icfd_closed(6).value == R(360, 277));
    CHECK(dof_icfd_closed(7).value == R(7560, 5783));
    CHECK(dof_icfd_closed(8).value == R(10080, 7673));
    CHECK(std::abs(dof_icfd_closed(1000).value.to_double() - 4.0 / 3) < 1e-2);
    auto two = dof_icfd_closed(2);
    CHECK_FALSE(two.supported);
    CHECK(two.value == R(1));
    CHECK_FALSE(dof_icfd_recursive(1, 2).supported);
}

TEST_CASE("output-feedback interference channel") {
    CHECK(dof_icof_order(4, 5) == R(5, 4));
    CHECK(dof_icof_order(2, 3) == R(3, 2));
    for (int K = 6; K <= 12; ++K) {
        const int c = (K + 1) / 2;
        CHECK(dof_icof_order(c, K) == dof_icof_order_recursive(c, K));
        CHECK(dof_icof_order(c + 1, K) == dof_icof_order_recursive(c + 1, K));
    }
    CHECK(mu_star(3) == 2);
    CHECK(mu_star(4) == 2);
    CHECK(mu_star(30) == mu_exhaustive(30));
    CHECK(mu_star(6) == 3);
    CHECK(mu_star(10) == 4);
    CHECK(mu_star(60) == 11);
    CHECK(dof_icof(3).value == R(6, 5));
    CHECK(dof_icof(4).value == R(24, 19));
    CHECK(dof_icof(5).value == R(240, 187));
    CHECK(dof_icof(6).value == R(90, 67));
    CHECK(dof_icof(7).value == R(1890, 1373));
    CHECK(dof_icof(8).value == R(2520, 1793));
    CHECK(dof_icof(200).value > dof_icof(100).value);
    CHECK(dof_icof(200).value < R(2));
    for (int K = 3; K <= 20; ++K)
        for (int w = 2; w <= (K + 1) / 2; ++w) CHECK(icof_objective(w, K) == icof_objective_recursive(w, K));
}

TEST_CASE("Shannon-feedback interference channel") {
    for (int K = 3; K <= 9; ++K) CHECK(dof_icsf_order(K, K) == R(1));
    CHECK(dof_icsf_order(3, 4) == R(8, 7));
    for (int K = 4; K <= 12; ++K) CHECK(dof_icsf_order(2, K) == dof_icsf_order_recursive(2, K));
    CHECK(dof_icsf(3).value == R(6, 5));
    CHECK(dof_icsf(4).value == R(24, 19));
    CHECK(dof_icsf(5).value == R(180, 137));
    CHECK(dof_icsf(6).value == R(90, 67));
    CHECK(dof_icsf(7).value == R(15120, 10883));
    CHECK(dof_icsf(8).value == R(40320, 28381));
    CHECK(nu_star(5) == 2);
    CHECK(nu_star(6) == 3);
    CHECK(nu_star(10) == 3);
    CHECK(nu_star(60) == 11);
    for (int K = 3; K <= 60; ++K) CHECK(dof_icsf(K).value < R(2));
    CHECK_FALSE(dof_icsf(2).supported);
    CHECK_THROWS_AS(dof_icsf_order(1, 5), ParameterError);
}

TEST_CASE("X channels") {
    CHECK(dof_xfd(2, 2) == R(4, 3));
    CHECK(dof_xfd(3, 3) == R(24, 17));
    CHECK(dof_xfd(4, 4) == R(72, 49));
    CHECK(dof_xfd(5, 5) == R(270, 181));
    CHECK(dof_xfd(6, 6) == R(80, 53));
    CHECK(dof_xfd(7, 7) == R(20160, 13277));
    CHECK(dof_xfd(8, 8) == R(50400, 33029));
    CHECK(std::abs(dof_xfd(2, 500).to_double() - 1 / std::log(2.0)) < 1e-2);
    CHECK_THROWS_AS(dof_xfd(1, 3), ParameterError);
    for (int K = 2; K <= 8; ++K) CHECK(dof_xof(K) == R(2 * K, K + 1));
    CHECK(dof_xsf(2) == R(4, 3));
    CHECK(dof_xsf(3) == R(27, 17));
    CHECK(dof_xsf(4) == R(128, 75));
    CHECK(dof_xsf(5) == R(1125, 632));
    CHECK(dof_xsf(6) == R(972, 533));
    CHECK(dof_xsf(7) == R(20580, 11099));
    CHECK(dof_xsf(8) == R(184320, 98279));
    for (int K = 2; K <= 30; ++K) CHECK(dof_xsf(K) == dof_xsf_composed(K));
    CHECK_THROWS_AS(dof_xsf(1), ParameterError);
}

TEST_CASE("limits") {
    CHECK(*asymptote(kICFD).exact == R(4, 3));
    CHECK(*asymptote(kICOF).exact == R(2));
    CHECK(*asymptote(kXSF).exact == R(2));
    CHECK(asymptote(kXFD, 2).value == doctest::Approx(1 / std::log(2.0)).epsilon(1e-12));
    CHECK(asymptote(kXFD, 3).value == doctest::Approx(8 / (3 * std::log(3.0) + 2)).epsilon(1e-12));
    CHECK(asymptote(kXFD, kWideM).value == doctest::Approx(6 / (std::numbers::pi * std::numbers::pi - 6)));
    // Fixed-M limit is approached from below along K.
    for (int M : {2, 3, 4}) CHECK(std::abs(dof_xfd(M, 400).to_double() - asymptote(kXFD, M).value) < 1e-2);
}

TEST_CASE("consistency sweep") {
    auto small = consistency_sweep(3);
    CHECK(small.ok());
    CHECK(small.rows.size() == 6);
    auto rep = consistency_sweep(30);
    CHECK(rep.ok());
    auto bad = consistency_sweep(10, {.q_offset = 1});
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.first_mismatch->K == 3);
    CHECK(bad.first_mismatch->model == "icsf");
}
