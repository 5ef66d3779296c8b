#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "dvm/rational.hpp"

namespace dvm {

// Exact element of the quadratic field Q(sqrt(3)): value = a + b*sqrt(3).
// The representation (a, b) is unique because sqrt(3) is irrational, so
// equality is componentwise and the sign is decidable exactly.
class Q3 {
public:
    Q3() = default;
    Q3(int v) : a_(v) {}
    Q3(long v) : a_(v) {}
    Q3(long long v) : a_(v) {}
    Q3(Rat a) : a_(std::move(a)) {}
    Q3(Rat a, Rat b) : a_(std::move(a)), b_(std::move(b)) {}

    static Q3 sqrt3() { return Q3(Rat(0), Rat(1)); }

    const Rat& rational_part() const { return a_; }
    const Rat& sqrt3_part() const { return b_; }
    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    // Conversion for code that works over plain rationals (the LP layer).
    const Rat& as_rational() const {
        if (!is_rational())
            throw DomainError("scalar " + dvm::to_string(a_) + "+" + dvm::to_string(b_) +
                              "\xE2\x88\x9A\x33 is not rational");
        return a_;
    }

    // Exact sign in {-1, 0, +1}; never consults floating point. When a and b
    // have opposite signs, compares a^2 against 3*b^2.
    int sign() const {
        int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        Rat lhs = a_ * a_, rhs = 3 * b_ * b_;
        if (lhs == rhs) return 0;  // unreachable for nonzero a, b; kept for exactness
        return lhs > rhs ? sa : sb;
    }

    Q3 operator-() const { return Q3(-a_, -b_); }

    Q3& operator+=(const Q3& o) {
        a_ += o.a_;
        b_ += o.b_;
        return *this;
    }
    Q3& operator-=(const Q3& o) {
        a_ -= o.a_;
        b_ -= o.b_;
        return *this;
    }
    Q3& operator*=(const Q3& o) {
        Rat a = a_ * o.a_ + 3 * b_ * o.b_;
        Rat b = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(a);
        b_ = std::move(b);
        return *this;
    }
    Q3& operator/=(const Q3& o) { return *this *= o.inverse(); }

    // 1/(a + b*sqrt(3)) = (a - b*sqrt(3)) / (a^2 - 3 b^2).
    Q3 inverse() const {
        if (is_zero()) throw DivisionByZero("Q3 division by zero");
        Rat d = a_ * a_ - 3 * b_ * b_;
        if (d == 0) throw DivisionByZero("Q3 inverse: degenerate representation");
        return Q3(a_ / d, -b_ / d);
    }

    double to_double() const { return dvm::to_double(a_) + dvm::to_double(b_) * std::sqrt(3.0); }

private:
    Rat a_ = 0;
    Rat b_ = 0;
};

inline Q3 operator+(Q3 x, const Q3& y) { return x += y; }
inline Q3 operator-(Q3 x, const Q3& y) { return x -= y; }
inline Q3 operator*(Q3 x, const Q3& y) { return x *= y; }
inline Q3 operator/(Q3 x, const Q3& y) { return x /= y; }

inline bool operator==(const Q3& x, const Q3& y) {
    return x.rational_part() == y.rational_part() && x.sqrt3_part() == y.sqrt3_part();
}
inline bool operator!=(const Q3& x, const Q3& y) { return !(x == y); }
inline bool operator<(const Q3& x, const Q3& y) { return (x - y).sign() < 0; }
inline bool operator>(const Q3& x, const Q3& y) { return (x - y).sign() > 0; }
inline bool operator<=(const Q3& x, const Q3& y) { return (x - y).sign() <= 0; }
inline bool operator>=(const Q3& x, const Q3& y) { return (x - y).sign() >= 0; }

inline int q3_sign(const Q3& x) { return x.sign(); }
inline Q3 q3_abs(const Q3& x) { return x.sign() < 0 ? -x : x; }
inline const Q3& q3_min(const Q3& x, const Q3& y) { return y < x ? y : x; }
inline const Q3& q3_max(const Q3& x, const Q3& y) { return x < y ? y : x; }

inline double to_double(const Q3& x) { return x.to_double(); }

// The protocol parameters fixed throughout the tight analysis:
// lambda* = (3 - sqrt(3))/2 and w* = sqrt(3) - 1.
inline std::pair<Q3, Q3> canonical_params() {
    return {Q3(Rat(3, 2), Rat(-1, 2)), Q3(Rat(-1), Rat(1))};
}

// Text form: "p/q" for rationals, otherwise "p/q+r/s√3" (the sqrt coefficient
// keeps its sign in the middle, e.g. "3/2-1/2√3").
inline std::string to_string(const Q3& x) {
    if (x.is_rational()) return to_string(x.rational_part());
    std::string s = to_string(x.rational_part());
    s += sgn(x.sqrt3_part()) < 0 ? '-' : '+';
    s += to_string(rat_abs(x.sqrt3_part()));
    s += "\xE2\x88\x9A";  // U+221A
    s += '3';
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Q3& x) { return os << to_string(x); }

namespace detail {

// Replaces ASCII spellings of the radical with the canonical UTF-8 one.
inline std::string normalize_radical(std::string s) {
    const std::string canonical = "\xE2\x88\x9A\x33";  // "√3"
    for (const char* alt : {"sqrt(3)", "sqrt3"}) {
        std::string a(alt);
        std::size_t pos;
        while ((pos = s.find(a)) != std::string::npos) s.replace(pos, a.size(), canonical);
    }
    return s;
}

}  // namespace detail

// Parses the scalar encoding: at most two signed terms, at most one carrying
// the √3 radical ("1/2", "3/2-1/2√3", "-√3", "2sqrt3", ...).
inline Q3 parse_scalar(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    s = detail::normalize_radical(s);
    const std::string rad = "\xE2\x88\x9A\x33";

    Rat a = 0, b = 0;
    bool have_a = false, have_b = false;
    std::size_t pos = 0;
    int terms = 0;
    while (pos < s.size()) {
        if (++terms > 2) throw ParseError("too many terms in scalar '" + text + "'");
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        }
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/' || s[pos] == '.'))
            ++pos;
        std::string num = s.substr(start, pos - start);
        bool radical = s.compare(pos, rad.size(), rad) == 0;
        if (radical) pos += rad.size();
        if (num.empty() && !radical) throw ParseError("bad scalar '" + text + "'");
        Rat value = num.empty() ? Rat(1) : parse_rational(num);
        if (sign < 0) value = -value;
        if (radical) {
            if (have_b) throw ParseError("duplicate \xE2\x88\x9A\x33 term in '" + text + "'");
            b = value;
            have_b = true;
        } else {
            if (have_a) throw ParseError("duplicate rational term in '" + text + "'");
            a = value;
            have_a = true;
        }
    }
    if (!have_a && !have_b) throw ParseError("empty scalar '" + text + "'");
    return Q3(a, b);
}

}  // namespace dvm
