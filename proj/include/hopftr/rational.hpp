#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace hopftr {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
    return r.str();
}

// Parses "p", "-p" or "p/q" with arbitrary-precision parts.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw std::runtime_error("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: '" + text + "'");
    }
}

inline Integer factorial(unsigned n) {
    Integer r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= int(i);
    return r;
}

inline Integer binomial_int(unsigned n, unsigned k) {
    if (k > n) return 0;
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= int(n - i);
        r /= int(i + 1);
    }
    return r;
}

// Generalized binomial: top may be any rational, k a non-negative integer.
inline Rational binomial_general(const Rational& top, unsigned k) {
    Rational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= top - int(i);
    return r / Rational(factorial(k));
}

}  // namespace hopftr
