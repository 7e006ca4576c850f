#ifndef NORMSCHED_DYADIC_HPP
#define NORMSCHED_DYADIC_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace normsched {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational: numerator / 2^exponent, kept normalized so the
/// numerator is odd (or zero with exponent 0). All schedule times live here.
class Dyadic {
public:
    Dyadic() : num_(0), exp_(0) {}
    Dyadic(long long value) : num_(value), exp_(0) {}
    Dyadic(BigInt numerator, unsigned exponent) : num_(std::move(numerator)), exp_(exponent) {
        normalize();
    }

    static Dyadic zero() { return Dyadic(); }
    static Dyadic one() { return Dyadic(1); }

    /// Parses "num" or "num/den" with den a positive power of two.
    static Dyadic parse(const std::string& text);

    const BigInt& numerator() const { return num_; }
    unsigned exponent() const { return exp_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return exp_ == 0; }

    /// True iff value * 2^l is an integer.
    bool is_l_normal(unsigned l) const { return exp_ <= l; }

    Dyadic operator-() const { return Dyadic(-num_, exp_); }
    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator*(const Dyadic& o) const;
    Dyadic& operator+=(const Dyadic& o) { *this = *this + o; return *this; }
    Dyadic& operator-=(const Dyadic& o) { *this = *this - o; return *this; }

    Dyadic scaled(const BigInt& k) const { return Dyadic(num_ * k, exp_); }
    Dyadic half() const { return num_ == 0 ? Dyadic() : Dyadic(num_, exp_ + 1); }

    std::strong_ordering operator<=>(const Dyadic& o) const;
    bool operator==(const Dyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }

    /// Lowest-terms fraction string: "3/2", "0", "-5/8", "7".
    std::string str() const;
    /// Exact finite decimal expansion (power-of-two denominators terminate).
    std::string decimal_str() const;

private:
    void normalize();

    BigInt num_;
    unsigned exp_;
};

Dyadic min(const Dyadic& a, const Dyadic& b);
Dyadic max(const Dyadic& a, const Dyadic& b);
Dyadic abs(const Dyadic& a);

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

} // namespace normsched

#endif
