// Classical special functions: the Lobachevsky function and the dilogarithm.
//
// Both are evaluated through the expansion of Li2(e^w) around w = 0,
//
//   Li2(e^w) = pi^2/6 + w - w log(-w) - w^2/4 - sum_{k>=1} c_k w^{2k+1},
//   c_k = B_{2k} / (2k (2k)! (2k+1)),
//
// which converges for |w| < 2 pi.  The coefficients come from zeta(2k), so no
// Bernoulli recurrences are needed.
#pragma once

#include <array>
#include <vector>
#include "qtopo/cplx.hpp"

namespace qtopo {

namespace detail {

// zeta(s) for even integer s >= 2: closed pi-power forms for small s, direct
// summation (rapidly convergent) for s >= 16.
template <class R>
R zeta_int(int s) {
    const R pi = scalar_traits<R>::pi();
    const R pi2 = pi * pi;
    switch (s) {
        case 2:  return pi2 / R(6.0);
        case 4:  return pi2 * pi2 / R(90.0);
        case 6:  return pi2 * pi2 * pi2 / R(945.0);
        case 8:  return pi2 * pi2 * pi2 * pi2 / R(9450.0);
        case 10: return pi2 * pi2 * pi2 * pi2 * pi2 / R(93555.0);
        case 12: return pi2 * pi2 * pi2 * pi2 * pi2 * pi2 * R(691.0) / R(638512875.0);
        case 14: return pi2 * pi2 * pi2 * pi2 * pi2 * pi2 * pi2 * R(2.0) / R(18243225.0);
        default: break;
    }
    R sum(1.0);
    for (int n = 2; n <= 150; ++n) {
        R p(1.0), nn(double(n));
        for (int i = 0; i < s; ++i) p *= nn;
        R t = R(1.0) / p;
        sum += t;
        if (to_double(t) < 1e-36) break;
    }
    return sum;
}

// c_k = (-1)^{k+1} 2 zeta(2k) / ((2 pi)^{2k} 2k (2k+1))
template <class R>
const std::vector<R>& li2_coeffs() {
    static const std::vector<R> cs = [] {
        std::vector<R> v;
        const R tp = scalar_traits<R>::two_pi();
        R tp2k(1.0);
        for (int k = 1; k <= 90; ++k) {
            tp2k *= tp * tp;
            R c = R(2.0) * zeta_int<R>(2 * k) / (tp2k * R(double(2 * k)) * R(double(2 * k + 1)));
            v.push_back((k & 1) ? c : -c);
        }
        return v;
    }();
    return cs;
}

} // namespace detail

// Lobachevsky function  Lambda(t) = -int_0^t log|2 sin u| du,
// odd, pi-periodic.  Absolute accuracy ~1e-15 (double) from the accelerated
// series Lambda(t) = t - t log(2t) - (1/2) sum_k c_k (-1)^k (2t)^{2k+1}.
template <class R>
R lobachevsky_t(R t) {
    const R p = scalar_traits<R>::pi();
    R k = round_nearest(t / p);
    t = t - k * p;                      // now |t| <= pi/2
    double td = to_double(t);
    if (td == 0.0) return R(0.0);
    R sign(1.0);
    if (td < 0.0) { t = -t; sign = R(-1.0); }
    R x = t * R(2.0);                   // x = 2t in (0, pi]
    R acc = t - t * log(x);
    R x2 = x * x;
    R pw = x;
    const auto& cs = detail::li2_coeffs<R>();
    double tol = scalar_traits<R>::eps;
    for (size_t k2 = 1; k2 <= cs.size(); ++k2) {
        pw *= x2;
        R term = cs[k2 - 1] * pw * R(0.5);
        acc = (k2 & 1) ? acc + term : acc - term;   // -(1/2) c_k (-1)^k x^{2k+1}
        if (std::fabs(to_double(term)) < tol) break;
    }
    return sign * acc;
}

inline double lobachevsky(double t) { return lobachevsky_t<double>(t); }

// v8 = volume of the regular ideal octahedron, always derived from Lambda.
inline double octahedron_volume() { return 8.0 * lobachevsky(3.141592653589793238462643 / 4.0); }

// Principal-branch dilogarithm on C \ (1, inf).
// Strategy: power series for small |z|; inversion for large |z|; otherwise the
// log-expansion above (|log z| < 2 pi holds on the remaining annulus).
template <class R>
cplx<R> dilog_t(cplx<R> z) {
    using C = cplx<R>;
    const R pi = scalar_traits<R>::pi();
    const R pi2_6 = pi * pi / R(6.0);
    double az = to_double(abs(z));
    if (az == 0.0) return C(R(0.0), R(0.0));
    if (az <= 0.5) {
        C term = z, sum = z;
        C zp = z;
        double tol = scalar_traits<R>::eps;
        for (int n = 2; n <= 120; ++n) {
            zp = zp * z;
            term = zp / R(double(n) * double(n));
            sum += term;
            if (to_double(abs(term)) < tol * (to_double(abs(sum)) + 1e-30)) break;
        }
        return sum;
    }
    if (az >= 2.0) {
        // Li2(z) = -Li2(1/z) - pi^2/6 - (1/2) log^2(-z)
        C inv = C(R(1.0), R(0.0)) / z;
        C lm = log(-z);
        return -dilog_t(inv) - C(pi2_6, R(0.0)) - lm * lm * R(0.5);
    }
    // annulus: Li2(e^w), w = log z, |w| <= log 2 + pi < 2 pi
    C w = log(z);
    C res = C(pi2_6, R(0.0)) + w - w * log(-w) - w * w * R(0.25);
    C w2 = w * w;
    C pw = w;
    const auto& cs = detail::li2_coeffs<R>();
    double tol = scalar_traits<R>::eps;
    for (size_t k = 1; k <= cs.size(); ++k) {
        pw = pw * w2;
        C term = pw * cs[k - 1];
        res -= term;
        if (to_double(abs(term)) < tol) break;
    }
    return res;
}

inline cd dilog(cd z) { return dilog_t<double>(z); }

// Li2(e^{2 i w}) -- the combination the geometric potentials use everywhere.
// Real w uses the unit-circle closed form pi^2/6 + t(t-pi) + 2 i Lambda(t).
template <class R>
cplx<R> dilog_exp2i(cplx<R> w) {
    const R pi = scalar_traits<R>::pi();
    if (to_double(w.im) == 0.0) {
        R t = w.re;
        const R tp = scalar_traits<R>::two_pi();
        R k = round_nearest((t - pi * R(0.5)) / pi);
        t = t - k * pi;                      // representative in [pi/2 +- pi/2) = [0, pi)
        return {pi * pi / R(6.0) + t * (t - pi), lobachevsky_t(t) * R(2.0)};
    }
    return dilog_t(exp(cplx<R>(-w.im * R(2.0), w.re * R(2.0))));
}

} // namespace qtopo
