#pragma once

// Scalar carriers for algebra coefficients. Exact mode uses rationals with a
// Gaussian-rational imaginary part; float mode uses binary64 complex with a
// caller-supplied comparison tolerance.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "sga/gindex.hpp"

namespace sga {

// Exact complex scalar: re + i*im with rational parts.
struct GaussRat {
    Rational re{};
    Rational im{};

    GaussRat() = default;
    GaussRat(Rational r) : re(std::move(r)) {}
    GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(int v) : re(v) {}
    GaussRat(long v) : re(v) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussRat& operator+=(const GaussRat& b) { re += b.re; im += b.im; return *this; }
    GaussRat& operator-=(const GaussRat& b) { re -= b.re; im -= b.im; return *this; }
    GaussRat& operator*=(const GaussRat& b) { return *this = *this * b; }

    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
        Rational den = b.re * b.re + b.im * b.im;
        if (den == 0) throw std::domain_error("GaussRat: division by zero");
        return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
    }

    friend bool operator==(const GaussRat&, const GaussRat&) = default;
};

inline std::string rational_str(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Carrier traits. Real is the coefficient field for bodies and base points.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<GaussRat> {
    using Real = Rational;
    static constexpr bool exact = true;

    static GaussRat zero() { return {}; }
    static GaussRat one() { return GaussRat(1); }
    static GaussRat from_real(const Real& r) { return GaussRat(r); }
    static GaussRat from_int(long v) { return GaussRat(v); }
    static bool is_zero(const GaussRat& s) { return s.is_zero(); }
    static Real real_part(const GaussRat& s) { return s.re; }
    static Real imag_part(const GaussRat& s) { return s.im; }

    // Exact magnitude |re| + |im|. The complex modulus is irrational in
    // general; this taxicab magnitude keeps the metric rational and induces
    // the same topology (it is within a factor sqrt(2) of the modulus).
    static Real magnitude(const GaussRat& s) {
        return boost::multiprecision::abs(s.re) + boost::multiprecision::abs(s.im);
    }

    static double to_double(const Real& r) { return static_cast<double>(r); }
    static Real real_from_double(double d) {
        // exact binary expansion of the double
        Rational r(d);
        return r;
    }
};

template <>
struct ScalarOps<std::complex<double>> {
    using Real = double;
    static constexpr bool exact = false;

    static std::complex<double> zero() { return {}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> from_real(double r) { return {r, 0.0}; }
    static std::complex<double> from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static bool is_zero(const std::complex<double>& s) {
        return s.real() == 0.0 && s.imag() == 0.0;
    }
    static double real_part(const std::complex<double>& s) { return s.real(); }
    static double imag_part(const std::complex<double>& s) { return s.imag(); }
    static double magnitude(const std::complex<double>& s) { return std::abs(s); }
    static double to_double(double r) { return r; }
    static double real_from_double(double d) { return d; }
};

using ComplexD = std::complex<double>;

// Parse "p/q", "p", or a decimal string into an exact rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        return Rational(num, den);
    }
    auto dot = text.find('.');
    auto epos = text.find_first_of("eE");
    if (dot == std::string::npos && epos == std::string::npos) return Rational(BigInt(text));

    // decimal form: mantissa digits scaled by a power of ten
    std::string mant = epos == std::string::npos ? text : text.substr(0, epos);
    long exp10 = epos == std::string::npos ? 0 : std::stol(text.substr(epos + 1));
    dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    bool neg = false;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
        neg = digits[0] == '-';
        digits = digits.substr(1);
    }
    if (digits.empty()) throw std::invalid_argument("malformed decimal literal: " + text);
    Rational r{BigInt(digits)};
    BigInt p10 = 1;
    for (long k = 0; k < std::labs(exp10); ++k) p10 *= 10;
    if (exp10 >= 0)
        r *= Rational(p10);
    else
        r /= Rational(p10);
    return neg ? -r : r;
}

}  // namespace sga
