// Minimal complex type templated over the real scalar (double or dd).
// std::complex is only specified for builtin floating types, so the extended
// precision path needs its own.
#pragma once

#include <cmath>
#include "qtopo/dd.hpp"

namespace qtopo {

using std::exp;
using std::log;
using std::sin;
using std::cos;
using std::sinh;
using std::cosh;
using std::sqrt;
using std::atan2;
using std::fabs;
using std::floor;

inline void sincos(double a, double& s, double& c) { s = std::sin(a); c = std::cos(a); }
inline double round_nearest(double a) { return std::round(a); }

template <class R>
struct cplx {
    R re{};
    R im{};

    cplx() = default;
    cplx(R r) : re(r), im(R(0.0)) {}
    cplx(R r, R i) : re(r), im(i) {}
    cplx(double r) : re(R(r)), im(R(0.0)) {}

    cplx& operator+=(const cplx& o) { re += o.re; im += o.im; return *this; }
    cplx& operator-=(const cplx& o) { re -= o.re; im -= o.im; return *this; }
};

template <class R> cplx<R> operator+(cplx<R> a, cplx<R> b) { return {a.re + b.re, a.im + b.im}; }
template <class R> cplx<R> operator-(cplx<R> a, cplx<R> b) { return {a.re - b.re, a.im - b.im}; }
template <class R> cplx<R> operator-(cplx<R> a) { return {-a.re, -a.im}; }
template <class R> cplx<R> operator*(cplx<R> a, cplx<R> b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> cplx<R> operator*(cplx<R> a, R s) { return {a.re * s, a.im * s}; }
template <class R> cplx<R> operator*(R s, cplx<R> a) { return a * s; }
template <class R> cplx<R> operator/(cplx<R> a, R s) { return {a.re / s, a.im / s}; }
template <class R> cplx<R> operator/(cplx<R> a, cplx<R> b) {
    R d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
template <class R> cplx<R> operator+(cplx<R> a, double b) { return a + cplx<R>(b); }
template <class R> cplx<R> operator+(double a, cplx<R> b) { return cplx<R>(a) + b; }
template <class R> cplx<R> operator-(cplx<R> a, double b) { return a - cplx<R>(b); }
template <class R> cplx<R> operator-(double a, cplx<R> b) { return cplx<R>(a) - b; }
template <class R> cplx<R> operator*(cplx<R> a, double s) { return a * R(s); }
template <class R> cplx<R> operator*(double s, cplx<R> a) { return a * R(s); }
template <class R> cplx<R> operator/(cplx<R> a, double s) { return a / R(s); }

template <class R> cplx<R> conj(cplx<R> a) { return {a.re, -a.im}; }
template <class R> R norm2(cplx<R> a) { return a.re * a.re + a.im * a.im; }
template <class R> R abs(cplx<R> a) { return sqrt(norm2(a)); }
template <class R> R arg(cplx<R> a) { return atan2(a.im, a.re); }

template <class R> cplx<R> exp(cplx<R> a) {
    R m = exp(a.re), s, c;
    sincos(a.im, s, c);
    return {m * c, m * s};
}
template <class R> cplx<R> log(cplx<R> a) { return {log(norm2(a)) * R(0.5), arg(a)}; }
template <class R> cplx<R> sqrt(cplx<R> a) {
    R m = sqrt(abs(a));
    R h = arg(a) * R(0.5), s, c;
    sincos(h, s, c);
    return {m * c, m * s};
}
template <class R> cplx<R> sinh(cplx<R> a) {
    R s, c;
    sincos(a.im, s, c);
    return {sinh(a.re) * c, cosh(a.re) * s};
}

// e^{i t}
template <class R> cplx<R> cis(R t) {
    R s, c;
    sincos(t, s, c);
    return {c, s};
}

using cd = cplx<double>;

inline cd to_cd(cplx<double> z) { return z; }
inline cd to_cd(cplx<dd> z) { return {to_double(z.re), to_double(z.im)}; }

} // namespace qtopo
