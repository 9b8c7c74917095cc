#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <ostream>
#include <string>

namespace retroalign {

using BigInt = boost::multiprecision::cpp_int;

// Exact fraction in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : v_(n) {}
    Rational(long long n, long long d);
    Rational(const BigInt& n) : v_(n) {}
    Rational(const BigInt& n, const BigInt& d);

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    double to_double() const { return v_.convert_to<double>(); }
    // "num/den", denominator always present.
    std::string str() const;
    // Decimal rendering with the given number of significant digits.
    std::string decimal(int digits = 12) const;

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    Rational inverse() const { return Rational(1) / *this; }
    // Integer power, exponent may be negative.
    Rational pow(long long e) const;

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    boost::multiprecision::cpp_rational v_{0};
};

// Parses "a/b" or "a".
Rational parse_rational(const std::string& s);

} // namespace retroalign
