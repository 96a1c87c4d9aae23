#pragma once

// Exact rational arithmetic helpers shared by every module.
//
// Everything downstream computes with boost::multiprecision::cpp_rational so
// that measure identities and norm values hold *exactly*; there is no floating
// point anywhere in the library. Two quirks of cpp_rational are wrapped here:
// the two-int constructor rejects negative denominators, and pow() is only
// provided for floating-point backends.

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace bpt {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// n/d with sign normalization; the only safe way to build a rational from a
// possibly-negative denominator.
inline Rational ratio(Int n, Int d) {
    if (d == 0) {
        throw std::domain_error("ratio: zero denominator");
    }
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return Rational(n, d);
}

inline Rational ratio(long long n, long long d) { return ratio(Int(n), Int(d)); }

// b^e for integer b and possibly negative e, exact.
inline Rational pow_rational(const Rational& b, long long e) {
    if (e == 0) {
        return Rational(1);
    }
    if (b == 0) {
        if (e < 0) {
            throw std::domain_error("pow_rational: 0 to a negative power");
        }
        return Rational(0);
    }
    bool invert = e < 0;
    unsigned long long n = invert ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                                  : static_cast<unsigned long long>(e);
    Rational acc(1);
    Rational base = b;
    while (n > 0) {
        if (n & 1ULL) {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    if (invert) {
        acc = Rational(denominator(acc), numerator(acc));
        if (acc < 0) {
            // keep canonical positive denominator
            acc = ratio(numerator(acc), denominator(acc));
        }
    }
    return acc;
}

// q^e as a rational (e may be negative); the workhorse for visual measures.
inline Rational int_pow(long long base, long long e) {
    return pow_rational(Rational(base), e);
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline int rational_sign(const Rational& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

// Canonical fraction rendering: gcd-reduced "num/den" with the denominator
// always present ("3/1", "-2/3"). cpp_rational keeps values reduced with a
// positive denominator, so this is a plain print.
inline std::string fraction_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Fixed-point decimal with `precision` fractional digits, ties rounded to
// even (banker's rounding), no sign on a rounded-to-zero result.
inline std::string decimal_string(const Rational& r, int precision) {
    if (precision < 0) {
        throw std::domain_error("decimal_string: negative precision");
    }
    const bool neg = r < 0;
    Int num = numerator(r);
    if (neg) num = -num;
    const Int den = denominator(r);
    Int scale = 1;
    for (int i = 0; i < precision; ++i) scale *= 10;
    // round-half-even on |r| * 10^precision
    Int q = num * scale / den;
    const Int rem = num * scale % den;
    const Int twice = rem * 2;
    if (twice > den || (twice == den && (q & 1) == 1)) {
        ++q;
    }
    const Int ipart = q / scale;
    std::string digits = ipart.str();
    std::string out = (neg && q != 0) ? "-" + digits : digits;
    if (precision > 0) {
        const Int fpart = q % scale;
        std::string frac = fpart.str();
        out += "." + std::string(static_cast<std::size_t>(precision) - frac.size(), '0') + frac;
    }
    return out;
}

} // namespace bpt
