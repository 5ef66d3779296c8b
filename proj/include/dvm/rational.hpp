#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "dvm/errors.hpp"

namespace dvm {

using Int = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, kept reduced with positive denominator by the
// backend. All decision paths in the library compare these exactly; doubles
// appear only in reporting helpers.
using Rat = boost::multiprecision::cpp_rational;

inline int sgn(const Rat& r) { return r.sign(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
inline std::string to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

namespace detail {

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace detail

// Accepts "p", "p/q" and finite decimals like "0.55", with an optional
// leading sign. Everything parses to an exact rational.
inline Rat parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;

    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = (s[0] == '-');
        s.erase(0, 1);
    }
    if (s.empty()) throw ParseError("empty rational in '" + text + "'");

    Rat r;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        if (!detail::all_digits(p) || !detail::all_digits(q))
            throw ParseError("bad rational '" + text + "'");
        Int den(q);
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        r = Rat(Int(p), den);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!detail::all_digits(ip) || !detail::all_digits(fp))
            throw ParseError("bad decimal '" + text + "'");
        Int scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        r = Rat(Int(ip)) + Rat(Int(fp), scale);
    } else {
        if (!detail::all_digits(s)) throw ParseError("bad rational '" + text + "'");
        r = Rat(Int(s));
    }
    return neg ? Rat(-r) : r;
}

}  // namespace dvm
