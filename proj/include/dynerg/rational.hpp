#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynerg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// N * (N-1) * ... * (N-k+1), exact.
inline BigInt falling_factorial(std::int64_t n, int k) {
    if (k < 0) throw std::invalid_argument("falling_factorial: negative k");
    BigInt r = 1;
    for (int i = 0; i < k; ++i) r *= BigInt(n - i);
    return r;
}

inline BigInt binomial(std::int64_t n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = falling_factorial(n, k);
    for (int i = 2; i <= k; ++i) r /= i;
    return r;
}

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Renders "p/q", or just "p" when q == 1.
inline std::string to_fraction_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Accepts "p/q", integers, and plain decimals ("0.3" -> 3/10); exact, no float round-trip.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto bad = [&] { throw std::invalid_argument("bad rational literal: '" + text + "'"); };
    std::size_t slash = text.find('/');
    if (slash != std::string::npos) {
        std::string p = text.substr(0, slash), q = text.substr(slash + 1);
        if (p.empty() || q.empty()) bad();
        Rational r;
        try {
            r = Rational(BigInt(p), BigInt(q));
        } catch (...) {
            bad();
        }
        return r;
    }
    std::size_t dot = text.find('.');
    std::string digits = text;
    int frac_digits = 0;
    if (dot != std::string::npos) {
        digits = text.substr(0, dot) + text.substr(dot + 1);
        frac_digits = static_cast<int>(text.size() - dot - 1);
        if (digits.empty() || digits == "-" || digits == "+") bad();
    }
    for (std::size_t i = 0; i < digits.size(); ++i) {
        char c = digits[i];
        if ((c == '+' || c == '-') && i == 0) continue;
        if (c < '0' || c > '9') bad();
    }
    if (digits == "-" || digits == "+") bad();
    BigInt den = 1;
    for (int i = 0; i < frac_digits; ++i) den *= 10;
    return Rational(BigInt(digits), den);
}

}  // namespace dynerg
