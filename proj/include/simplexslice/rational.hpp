#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "simplexslice/errors.hpp"

namespace sslice {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Parses "p/q" or a plain integer string.
inline Rational rational_from_string(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw DomainError("cannot parse rational literal '" + s + "'");
    }
}

inline std::string rational_to_string(const Rational& q) {
    std::string num = numerator(q).str();
    if (denominator(q) == 1) return num;
    return num + "/" + denominator(q).str();
}

// Exact rational from a double (every finite double is a dyadic rational).
inline Rational rational_from_double(double x) {
    return Rational(x);
}

}  // namespace sslice
