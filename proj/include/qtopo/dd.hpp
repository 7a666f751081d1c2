// Double-double arithmetic: an unevaluated sum of two doubles giving ~31
// significant digits.  Used as the extended-precision scalar behind
// RootContext tables and state sums.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <iosfwd>
#include <ostream>

namespace qtopo {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {

// Error-free transforms (Knuth / Dekker).
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace detail

inline dd operator+(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return detail::quick_two_sum(s.hi, lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline dd operator+(dd a, double b) { return a + dd(b); }
inline dd operator+(double a, dd b) { return dd(a) + b; }
inline dd operator-(dd a, double b) { return a - dd(b); }
inline dd operator-(double a, dd b) { return dd(a) - b; }
inline dd operator*(dd a, double b) { return a * dd(b); }
inline dd operator*(double a, dd b) { return dd(a) * b; }
inline dd operator/(dd a, double b) { return a / dd(b); }
inline dd operator/(double a, dd b) { return dd(a) / b; }

inline bool operator<(dd a, dd b)  { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b)  { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(dd a, dd b) { return !(a == b); }

inline dd fabs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }
inline bool isfinite(dd a) { return std::isfinite(a.hi); }

inline dd floor(dd a) {
    double fh = std::floor(a.hi);
    if (fh != a.hi) return {fh, 0.0};
    double fl = std::floor(a.lo);
    return detail::quick_two_sum(fh, fl);
}

inline dd round_nearest(dd a) { return floor(a + dd(0.5)); }

inline dd ldexp(dd a, int k) { return {std::ldexp(a.hi, k), std::ldexp(a.lo, k)}; }

inline dd sqrt(dd a) {
    if (a.hi <= 0.0) return {std::sqrt(a.hi), 0.0};
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    dd v = a - detail::two_prod(ax, ax);
    return detail::quick_two_sum(ax, v.hi * (x * 0.5));
}

// Constants (hi parts round-to-nearest, lo parts the residuals).
namespace ddc {
inline constexpr dd pi      {3.141592653589793116e+00,  1.224646799147353207e-16};
inline constexpr dd two_pi  {6.283185307179586232e+00,  2.449293598294706414e-16};
inline constexpr dd pi_half {1.570796326794896558e+00,  6.123233995736766036e-17};
inline constexpr dd pi_quarter {7.853981633974482790e-01, 3.061616997868383018e-17};
inline constexpr dd ln2     {6.931471805599452862e-01,  2.319046813846299558e-17};
inline constexpr dd e       {2.718281828459045091e+00,  1.445646891729250158e-16};
} // namespace ddc

inline dd exp(dd a) {
    // e^a = 2^k e^{a - k ln2}, |a - k ln2| <= ln2/2; Taylor on the remainder.
    if (a.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (a.hi < -746.0) return {0.0, 0.0};
    double kd = std::round(a.hi / ddc::ln2.hi);
    dd x = a - ddc::ln2 * dd(kd);
    dd sum = dd(1.0) + x;
    dd term = x;
    for (int n = 2; n <= 24; ++n) {
        term = term * x / double(n);
        sum += term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    return ldexp(sum, int(kd));
}

inline dd log(dd a) {
    // Newton on exp: y_{n+1} = y_n + a e^{-y_n} - 1, starting from double log.
    double y0 = std::log(a.hi);
    dd y(y0);
    for (int it = 0; it < 2; ++it)
        y = y + a * exp(-y) - dd(1.0);
    return y;
}

namespace detail {
inline void sincos_taylor(dd x, dd& s, dd& c) {
    // |x| <= pi/4
    dd x2 = x * x;
    dd term = x;
    s = x;
    for (int n = 1; n <= 14; ++n) {
        term = term * x2 / double((2 * n) * (2 * n + 1));
        s = (n & 1) ? s - term : s + term;
        if (std::fabs(term.hi) < 1e-35) break;
    }
    term = dd(1.0);
    c = dd(1.0);
    for (int n = 1; n <= 14; ++n) {
        term = term * x2 / double((2 * n - 1) * (2 * n));
        c = (n & 1) ? c - term : c + term;
        if (std::fabs(term.hi) < 1e-35) break;
    }
}
} // namespace detail

inline void sincos(dd a, dd& s, dd& c) {
    // Reduce modulo pi/2.  Arguments in this library stay below ~1e3, so the
    // two-term pi/2 gives ample reduction accuracy.
    double kd = std::round((a.hi + a.lo) / ddc::pi_half.hi);
    dd x = a - ddc::pi_half * dd(kd);
    dd s0, c0;
    detail::sincos_taylor(x, s0, c0);
    long k = long(kd) & 3;
    if (k < 0) k += 4;
    switch (k) {
        case 0: s = s0;  c = c0;  break;
        case 1: s = c0;  c = -s0; break;
        case 2: s = -s0; c = -c0; break;
        default: s = -c0; c = s0; break;
    }
}

inline dd sin(dd a) { dd s, c; sincos(a, s, c); return s; }
inline dd cos(dd a) { dd s, c; sincos(a, s, c); return c; }

inline dd sinh(dd a) {
    if (std::fabs(a.hi) < 0.05) {
        dd x2 = a * a, term = a, sum = a;
        for (int n = 1; n <= 8; ++n) {
            term = term * x2 / double((2 * n) * (2 * n + 1));
            sum += term;
        }
        return sum;
    }
    dd e = exp(a);
    return (e - dd(1.0) / e) * dd(0.5);
}

inline dd cosh(dd a) {
    dd e = exp(a);
    return (e + dd(1.0) / e) * dd(0.5);
}

inline dd atan2(dd y, dd x) {
    double a0 = std::atan2(y.hi, x.hi);
    if (!std::isfinite(a0) || (y.hi == 0.0 && x.hi > 0.0)) return dd(a0);
    dd a(a0);
    // Newton: rotate by -a and correct with the residual angle.
    for (int it = 0; it < 2; ++it) {
        dd s, c;
        sincos(a, s, c);
        dd num = y * c - x * s;
        dd den = x * c + y * s;
        a = a + num / den;
    }
    return a;
}

inline std::ostream& operator<<(std::ostream& os, dd a) { return os << (a.hi + a.lo); }

// Uniform scalar access helpers so templated code reads the same for double and dd.
inline double to_double(double x) { return x; }
inline double to_double(dd x) { return x.hi + x.lo; }

template <class R> struct scalar_traits;
template <> struct scalar_traits<double> {
    static constexpr double eps = 2.2e-16;
    static double pi() { return 3.141592653589793238462643383279502884; }
    static double two_pi() { return 2 * pi(); }
    static double from(double x) { return x; }
};
template <> struct scalar_traits<dd> {
    static constexpr double eps = 5e-32;
    static dd pi() { return ddc::pi; }
    static dd two_pi() { return ddc::two_pi; }
    static dd from(double x) { return dd(x); }
};

} // namespace qtopo

namespace std {
// Allow unqualified std:: usage in templates to resolve via ADL instead.
}
