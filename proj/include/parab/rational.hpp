#pragma once

#include <complex>
#include <cstdint>
#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace parab {

using Rational = mpq_class;
using cplx = std::complex<double>;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat_from_string(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline double to_double(const Rational& q) { return q.get_d(); }

// Coefficient-ring traits shared by the jet/series templates. Two rings are
// supported: exact rationals (germ checks) and complex binary64 (dynamics).
template <class K> struct ring_traits;

template <> struct ring_traits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_fraction(long n, long d) { return rat(n, d); }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static cplx to_complex(const Rational& x) { return cplx(x.get_d(), 0.0); }
    static constexpr bool exact = true;
};

template <> struct ring_traits<cplx> {
    static cplx zero() { return {0.0, 0.0}; }
    static cplx one() { return {1.0, 0.0}; }
    static cplx from_fraction(long n, long d) { return cplx(double(n) / double(d), 0.0); }
    static bool is_zero(const cplx& x) { return x == cplx(0.0, 0.0); }
    static cplx to_complex(const cplx& x) { return x; }
    static constexpr bool exact = false;
};

} // namespace parab
