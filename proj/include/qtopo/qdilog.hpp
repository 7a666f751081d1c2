// Faddeev-type quantum dilogarithm phi_r, defined on the strip
// -pi/r < Re z < pi + pi/r by the contour integral
//
//   phi_r(z) = (4 pi i / r) int_Omega e^{(2z-pi)x} / (4 x sinh(pi x) sinh(2 pi x / r)) dx,
//
// with Omega the real line indented by an upper semicircle of radius eps at 0.
// Values outside the strip come from the shift functional equations.
#pragma once

#include <cmath>
#include <vector>

#include "qtopo/qcore.hpp"
#include "qtopo/quadrature.hpp"

namespace qtopo {

struct phi_options {
    double contour_radius = 0.5;   // any eps in (0,1) gives identical results
    double abs_tol = 1e-13;
    double boundary_guard = 1e-6;  // minimum distance to the strip boundary
    double pole_guard = 1e-8;
};

struct phi_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// phi_r on the principal strip.
template <class R>
cplx<R> phi_r(int r, cplx<R> z, const phi_options& opt = {}) {
    using C = cplx<R>;
    const double pi_d = 3.141592653589793238462643383279502884;
    const R pi = scalar_traits<R>::pi();
    double re = to_double(z.re);
    if (re < -pi_d / r + opt.boundary_guard || re > pi_d + pi_d / r - opt.boundary_guard)
        throw phi_domain_error("phi_r: Re z outside the principal strip");

    const R eps(opt.contour_radius);
    const R rr(double(r));
    const C two_z_minus_pi = z * 2.0 - C(pi, R(0.0));

    auto integrand = [&](C x) -> C {
        C num = exp(two_z_minus_pi * x);
        C den = x * R(4.0) * sinh(pi * x) * sinh(pi * R(2.0) / rr * x);
        return num / den;
    };
    auto ray = [&](R x) -> C { return integrand(C(x, R(0.0))); };

    quad_options qo;
    qo.abs_tol = opt.abs_tol;

    // decay rates of |integrand| towards +inf / -inf
    double rate_p = 2.0 * pi_d + 2.0 * pi_d / r - 2.0 * re;
    double rate_m = 2.0 * re + 2.0 * pi_d / r;
    double digits = -std::log(opt.abs_tol) + 6.0;
    double xmax_p = digits / rate_p + 2.0;
    double xmax_m = digits / rate_m + 2.0;

    // positive ray, panels doubling in length
    cplx<R> acc{R(0.0), R(0.0)};
    {
        double a = opt.contour_radius, len = 1.0;
        while (a < xmax_p) {
            double b = std::min(a + len, xmax_p + len);
            acc += integrate(ray, R(a), R(b), qo);
            a = b;
            len *= 2.0;
            if (a >= xmax_p) break;
        }
    }
    // negative ray
    {
        double a = -opt.contour_radius, len = 1.0;
        while (a > -xmax_m) {
            double b = std::max(a - len, -xmax_m - len);
            acc += integrate(ray, R(b), R(a), qo);
            a = b;
            len *= 2.0;
            if (a <= -xmax_m) break;
        }
    }
    // semicircle from -eps to +eps through the upper half plane: t from pi to 0
    auto semi = [&](R t) -> C {
        C x = cis(t) * eps;
        return integrand(x) * C(R(0.0), R(1.0)) * x;
    };
    acc += gl_apply(semi, pi, R(0.0), 64);

    return C(R(0.0), R(4.0) * pi / rr) * acc;
}

inline double phi_pole_distance(int r, cd z) {
    // poles at (a+1) pi + b pi / r and -a pi - b pi / r, a >= 0, b odd >= 1
    const double pi = 3.141592653589793238462643383279502884;
    double best = 1e300;
    double re = z.re, im = z.im;
    for (int a = 0; a * pi < std::fabs(re) + 2 * pi; ++a) {
        for (int b = 1; b * pi / r < 2 * pi + pi; b += 2) {
            double p1 = (a + 1) * pi + b * pi / r;
            double p2 = -a * pi - b * pi / r;
            best = std::min(best, std::hypot(re - p1, im));
            best = std::min(best, std::hypot(re - p2, im));
        }
    }
    return best;
}

// Meromorphic extension by the shift relations, one 2 pi / r step at a time:
//   phi_r(z) = phi_r(z - 2 pi / r) - (4 pi i / r) log(1 - e^{2 i (z - pi/r)})   (to the right)
//   phi_r(z) = phi_r(z + 2 pi / r) + (4 pi i / r) log(1 - e^{2 i (z + pi/r)})   (to the left)
template <class R>
cplx<R> phi_r_extended(int r, cplx<R> z, const phi_options& opt = {}) {
    using C = cplx<R>;
    const double pi_d = 3.141592653589793238462643383279502884;
    const R pi = scalar_traits<R>::pi();
    const R step = pi * R(2.0) / R(double(r));
    if (phi_pole_distance(r, to_cd(z)) < opt.pole_guard)
        throw phi_domain_error("phi_r_extended: too close to a pole");

    double lo = -pi_d / r + opt.boundary_guard;
    double hi = pi_d + pi_d / r - opt.boundary_guard;
    C corr{R(0.0), R(0.0)};
    const C fac{R(0.0), R(4.0) * pi / R(double(r))};
    int guard = 0;
    while (to_double(z.re) > hi && guard++ < 4 * r) {
        C w = z - C(pi / R(double(r)), R(0.0));
        corr -= fac * log(C(R(1.0), R(0.0)) - exp(C(-w.im * R(2.0), w.re * R(2.0))));
        z = z - C(step, R(0.0));
    }
    while (to_double(z.re) < lo && guard++ < 4 * r) {
        C w = z + C(pi / R(double(r)), R(0.0));
        corr += fac * log(C(R(1.0), R(0.0)) - exp(C(-w.im * R(2.0), w.re * R(2.0))));
        z = z + C(step, R(0.0));
    }
    return phi_r(r, z, opt) + corr;
}

// Lattice cache: phi_r evaluated at the arguments the U_r sums need,
//   A_j = phi_r(2 pi j / r + pi / r)   and   B_j = phi_r(2 pi j / r),
// for all j keeping the argument inside the principal strip.
template <class R>
struct phi_lattice {
    int r;
    std::vector<cplx<R>> A, B;

    explicit phi_lattice(int r_, const phi_options& opt = {}) : r(r_) {
        const double pi_d = 3.141592653589793238462643383279502884;
        const R pi = scalar_traits<R>::pi();
        const R step = pi * R(2.0) / R(double(r));
        int nA = 0;
        while (2.0 * pi_d * nA / r + pi_d / r < pi_d + pi_d / r - 2e-9) ++nA;
        A.resize(size_t(nA));
        for (int j = 0; j < nA; ++j)
            A[size_t(j)] = phi_r(r, cplx<R>(step * R(double(j)) + pi / R(double(r)), R(0.0)), opt);
        int nB = 0;
        while (2.0 * pi_d * (nB + 1) / r < pi_d + pi_d / r - 1e-12) ++nB;
        B.assign(size_t(nB + 1), cplx<R>{R(0.0), R(0.0)});
        for (int j = 1; j <= nB; ++j)
            B[size_t(j)] = phi_r(r, cplx<R>(step * R(double(j)), R(0.0)), opt);
    }

    // phi_r(2 pi j / r + pi / r)
    cplx<R> at_half(long j) const { return A.at(size_t(j)); }
    // phi_r(2 pi j / r), j >= 1
    cplx<R> at_whole(long j) const { return B.at(size_t(j)); }
};

// |(q)_n by direct product minus (q)_n via phi_r|, both branches of the
// factorial identities; returns {residual branch 1, residual branch 2}.
template <class R>
std::pair<double, double> qpochhammer_check(const root_context<R>& ctx, int n,
                                            const phi_options& opt = {}) {
    using C = cplx<R>;
    const int r = ctx.r();
    const R pi = scalar_traits<R>::pi();
    C direct{R(1.0), R(0.0)};
    for (int k = 1; k <= n; ++k)
        direct = direct * (C(R(1.0), R(0.0)) - cis(ctx.angle(2L * k)));

    const C rf(R(double(r)) / (R(4.0) * pi));      // r / (4 pi); times -i below
    auto expo = [&](C d) {                          // e^{ (r/4 pi i) d }
        C w = C(R(0.0), R(-1.0)) * rf * d;
        return exp(w);
    };
    C phi0 = phi_r(r, C(pi / R(double(r)), R(0.0)), opt);

    double res1 = -1.0, res2 = -1.0;
    {
        C phin = phi_r_extended(r, C(ctx.angle(2L * n) + pi / R(double(r)), R(0.0)), opt);
        C v = expo(phi0 - phin);
        res1 = to_double(abs(v - direct));
    }
    if (n >= (r - 1) / 2) {
        C phin = phi_r(r, C(ctx.angle(2L * n) + pi / R(double(r)) - pi, R(0.0)), opt);
        C v = expo(phi0 - phin) * 2.0;
        res2 = to_double(abs(v - direct));
    }
    return {res1, res2};
}

} // namespace qtopo
