#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rhosum {

using Int128 = __int128;

/// Exact rational with int64 numerator/denominator, always normalized
/// (gcd 1, denominator positive). Intermediate products go through
/// __int128; the quantities handled here (point fractions, estimates,
/// disagreement ratios) stay far below the overflow range.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n) : num(n), den(1) {}
    Rational(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    static Rational from_int128(Int128 n, Int128 d) {
        if (d == 0) throw std::invalid_argument("rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        Int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) { Int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        constexpr Int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("rational: value out of int64 range");
        Rational r;
        r.num = static_cast<int64_t>(n);
        r.den = static_cast<int64_t>(d);
        return r;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational operator+(const Rational& o) const {
        return from_int128(Int128(num) * o.den + Int128(o.num) * den, Int128(den) * o.den);
    }
    Rational operator-(const Rational& o) const {
        return from_int128(Int128(num) * o.den - Int128(o.num) * den, Int128(den) * o.den);
    }
    Rational operator*(const Rational& o) const {
        return from_int128(Int128(num) * o.num, Int128(den) * o.den);
    }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw std::domain_error("rational: division by zero");
        return from_int128(Int128(num) * o.den, Int128(den) * o.num);
    }
    Rational abs() const { Rational r(*this); if (r.num < 0) r.num = -r.num; return r; }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return Int128(num) * o.den < Int128(o.num) * den; }
    bool operator<=(const Rational& o) const { return Int128(num) * o.den <= Int128(o.num) * den; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    std::string str() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline Rational rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational rat_min(const Rational& a, const Rational& b) { return a < b ? a : b; }

/// Parse "3", "3/4" or a plain decimal like "0.125" into an exact rational.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        int64_t n = std::stoll(s.substr(0, slash));
        int64_t d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (frac.size() > 18) frac = frac.substr(0, 18);
    bool neg = !whole.empty() && whole[0] == '-';
    int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    int64_t f = frac.empty() ? 0 : std::stoll(frac);
    int64_t den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Int128 n = Int128(w < 0 ? -w : w) * den + f;
    if (neg || w < 0) n = -n;
    return Rational::from_int128(n, den);
}

/// Smallest t >= 0 with 2^t >= 1/x, for rational x in (0, 1].
inline int ceil_log2_inverse(const Rational& x) {
    if (x.num <= 0) throw std::domain_error("ceil_log2_inverse: non-positive value");
    int t = 0;
    Int128 pow = 1;
    while (pow * x.num < x.den) {
        pow <<= 1;
        ++t;
        if (t > 62) throw std::overflow_error("ceil_log2_inverse: value too small");
    }
    return t;
}

} // namespace rhosum
