#include "retroalign/rational.hpp"

#include <cstdio>
#include <stdexcept>

namespace retroalign {

Rational::Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}

Rational::Rational(const BigInt& n, const BigInt& d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) v_ = boost::multiprecision::cpp_rational(BigInt(-n), BigInt(-d));
    else v_ = boost::multiprecision::cpp_rational(n, d);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::pow(long long e) const {
    Rational base = e < 0 ? inverse() : *this;
    unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Rational acc(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

std::string Rational::str() const {
    return numerator().str() + "/" + denominator().str();
}

std::string Rational::decimal(int digits) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, to_double());
    return buf;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

} // namespace retroalign
