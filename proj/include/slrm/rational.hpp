#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace slrm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Exact rational from a double (every finite double is a dyadic rational).
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    return Rational(x);
}

// Parses "12", "-0.25", "3/4". No exponent notation.
inline Rational parse_rational(std::string_view s) {
    auto fail = [&] { throw std::invalid_argument("not a rational: '" + std::string(s) + "'"); };
    if (s.empty()) fail();
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
        if (s.empty()) fail();
    }
    auto digits = [&](std::string_view d) -> BigInt {
        if (d.empty()) fail();
        BigInt v = 0;
        for (char c : d) {
            if (c < '0' || c > '9') fail();
            v = v * 10 + (c - '0');
        }
        return v;
    };
    Rational out;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = digits(s.substr(0, slash));
        BigInt den = digits(s.substr(slash + 1));
        if (den == 0) fail();
        out = Rational(num, den);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty()) fail();
        BigInt num = ip.empty() ? BigInt(0) : digits(ip);
        BigInt den = 1;
        for (char c : fp) {
            if (c < '0' || c > '9') fail();
            num = num * 10 + (c - '0');
            den *= 10;
        }
        out = Rational(num, den);
    } else {
        out = Rational(digits(s));
    }
    return negative ? Rational(-out) : out;
}

// Exact decimal expansion when the reduced denominator is 2^a * 5^b,
// otherwise falls back to "p/q". Round-trips through parse_rational exactly.
inline std::string format_rational(const Rational& r) {
    BigInt num = numerator(r), den = denominator(r);
    bool negative = num < 0;
    if (negative) num = -num;
    int twos = 0, fives = 0;
    BigInt rest = den;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) return r.str();  // "p/q"
    int scale = std::max(twos, fives);
    num *= boost::multiprecision::pow(BigInt(2), scale - twos);
    num *= boost::multiprecision::pow(BigInt(5), scale - fives);
    std::string digits = num.str();
    std::string out = negative ? "-" : "";
    if (scale == 0) return out + digits;
    if (static_cast<int>(digits.size()) <= scale) digits.insert(0, scale + 1 - digits.size(), '0');
    digits.insert(digits.size() - scale, ".");
    // trim trailing zeros in the fraction part
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return out + digits;
}

// Always "p/q" (q may be 1), for the exact-oracle output format.
inline std::string format_ratio(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline BigInt ceil_rational(const Rational& r) {
    BigInt num = numerator(r), den = denominator(r);
    BigInt q = num / den;
    if (num > 0 && q * den != num) ++q;
    return q;
}

}  // namespace slrm
