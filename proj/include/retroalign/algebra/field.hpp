#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace retroalign {

// Integers modulo the Mersenne prime 2^61 - 1.
struct PrimeField {
    using value_type = std::uint64_t;
    static constexpr std::uint64_t modulus = (std::uint64_t{1} << 61) - 1;
    static constexpr const char* name = "prime";

    static value_type zero() { return 0; }
    static value_type one() { return 1; }
    static bool is_zero(value_type a) { return a == 0; }

    static value_type reduce(unsigned __int128 x) {
        std::uint64_t lo = static_cast<std::uint64_t>(x & modulus);
        std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
        std::uint64_t s = lo + hi;
        if (s >= modulus) s -= modulus;
        return s;
    }
    static value_type add(value_type a, value_type b) {
        std::uint64_t s = a + b;
        return s >= modulus ? s - modulus : s;
    }
    static value_type sub(value_type a, value_type b) { return a >= b ? a - b : a + modulus - b; }
    static value_type neg(value_type a) { return a == 0 ? 0 : modulus - a; }
    static value_type mul(value_type a, value_type b) {
        return reduce(static_cast<unsigned __int128>(a) * b);
    }
    static value_type pow(value_type a, std::uint64_t e) {
        value_type r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    static value_type inv(value_type a) { return pow(a, modulus - 2); }
    static value_type from_int(long long v) {
        long long r = v % static_cast<long long>(modulus);
        return r < 0 ? static_cast<value_type>(r + static_cast<long long>(modulus)) : static_cast<value_type>(r);
    }

    template <class Rng>
    static value_type random_nonzero(Rng& rng) {
        std::uniform_int_distribution<std::uint64_t> d(1, modulus - 1);
        return d(rng);
    }
};

// Complex doubles. Coefficients below prune_tol are treated as zero.
struct ComplexField {
    using value_type = std::complex<double>;
    static constexpr double prune_tol = 1e-12;
    static constexpr double rank_tol = 1e-9;
    static constexpr const char* name = "complex";

    static value_type zero() { return {0, 0}; }
    static value_type one() { return {1, 0}; }
    static bool is_zero(value_type a) { return std::abs(a) < prune_tol; }
    static value_type add(value_type a, value_type b) { return a + b; }
    static value_type sub(value_type a, value_type b) { return a - b; }
    static value_type neg(value_type a) { return -a; }
    static value_type mul(value_type a, value_type b) { return a * b; }
    static value_type inv(value_type a) { return 1.0 / a; }
    static value_type from_int(long long v) { return {static_cast<double>(v), 0}; }

    // Standard circular Gaussian, E|h|^2 = 1.
    template <class Rng>
    static value_type random_nonzero(Rng& rng) {
        std::normal_distribution<double> d(0.0, std::sqrt(0.5));
        for (;;) {
            value_type v{d(rng), d(rng)};
            if (!is_zero(v)) return v;
        }
    }
};

enum class FieldMode { Prime, Complex };

inline const char* field_name(FieldMode f) { return f == FieldMode::Prime ? "prime" : "complex"; }

} // namespace retroalign
