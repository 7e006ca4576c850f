#include "normsched/dyadic.hpp"

#include <ostream>
#include <stdexcept>

namespace normsched {

void Dyadic::normalize() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    while (exp_ > 0 && bit_test(num_, 0) == false) {
        num_ >>= 1;
        --exp_;
    }
}

Dyadic Dyadic::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("Dyadic::parse: empty string");
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Dyadic(BigInt(text), 0);
    }
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("Dyadic::parse: denominator must be positive: " + text);
    unsigned exp = 0;
    while (bit_test(den, 0) == false) {
        den >>= 1;
        ++exp;
    }
    if (den != 1) throw std::invalid_argument("Dyadic::parse: denominator not a power of two: " + text);
    return Dyadic(num, exp);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    unsigned m = std::max(exp_, o.exp_);
    BigInt a = num_ << (m - exp_);
    BigInt b = o.num_ << (m - o.exp_);
    return Dyadic(a + b, m);
}

Dyadic Dyadic::operator-(const Dyadic& o) const {
    unsigned m = std::max(exp_, o.exp_);
    BigInt a = num_ << (m - exp_);
    BigInt b = o.num_ << (m - o.exp_);
    return Dyadic(a - b, m);
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
    return Dyadic(num_ * o.num_, exp_ + o.exp_);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    unsigned m = std::max(exp_, o.exp_);
    BigInt a = num_ << (m - exp_);
    BigInt b = o.num_ << (m - o.exp_);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Dyadic::str() const {
    if (exp_ == 0) return num_.str();
    BigInt den = BigInt(1) << exp_;
    return num_.str() + "/" + den.str();
}

std::string Dyadic::decimal_str() const {
    if (exp_ == 0) return num_.str();
    // num / 2^k == num * 5^k / 10^k, which terminates.
    BigInt scaled = num_;
    for (unsigned i = 0; i < exp_; ++i) scaled *= 5;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string digits = scaled.str();
    if (digits.size() <= exp_) digits.insert(0, exp_ + 1 - digits.size(), '0');
    digits.insert(digits.size() - exp_, ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return (neg ? "-" : "") + digits;
}

Dyadic min(const Dyadic& a, const Dyadic& b) { return a <= b ? a : b; }
Dyadic max(const Dyadic& a, const Dyadic& b) { return a >= b ? a : b; }
Dyadic abs(const Dyadic& a) { return a.is_negative() ? -a : a; }

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

} // namespace normsched
