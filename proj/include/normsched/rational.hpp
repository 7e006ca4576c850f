#ifndef NORMSCHED_RATIONAL_HPP
#define NORMSCHED_RATIONAL_HPP

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "normsched/dyadic.hpp"

namespace normsched {

/// Exact rational field used by the simplex; Dyadic embeds losslessly.
using Rational = boost::multiprecision::cpp_rational;

inline Rational to_rational(const Dyadic& d) {
    return Rational(d.numerator(), BigInt(1) << d.exponent());
}

/// Converts back when the denominator is a power of two.
inline std::optional<Dyadic> to_dyadic(const Rational& r) {
    BigInt den = denominator(r);
    unsigned exp = 0;
    while (bit_test(den, 0) == false) {
        den >>= 1;
        ++exp;
    }
    if (den != 1) return std::nullopt;
    return Dyadic(numerator(r), exp);
}

inline std::string rational_str(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace normsched

#endif
