// Adaptive Gauss-Legendre quadrature over complex-valued integrands, templated
// on the real scalar.  Panels are bisected until the embedded GL16/GL32 error
// estimate meets the target.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "qtopo/cplx.hpp"

namespace qtopo {

namespace detail {

// Legendre nodes/weights on [-1,1] by Newton iteration on P_n; refined in R.
template <class R>
struct gl_rule {
    std::vector<R> x, w;

    explicit gl_rule(int n) {
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double x0 = std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5));
            R xi(x0);
            for (int it = 0; it < 6; ++it) {
                R p0(1.0), p1(0.0);
                for (int j = 0; j < n; ++j) {
                    R p2 = p1;
                    p1 = p0;
                    p0 = ((R(double(2 * j + 1)) * xi * p1) - R(double(j)) * p2) / R(double(j + 1));
                }
                R dp = R(double(n)) * (xi * p0 - p1) / (xi * xi - R(1.0));
                R dx = p0 / dp;
                xi -= dx;
                if (std::fabs(to_double(dx)) < scalar_traits<R>::eps) break;
            }
            R p0(1.0), p1(0.0);
            for (int j = 0; j < n; ++j) {
                R p2 = p1;
                p1 = p0;
                p0 = ((R(double(2 * j + 1)) * xi * p1) - R(double(j)) * p2) / R(double(j + 1));
            }
            R dp = R(double(n)) * (xi * p0 - p1) / (xi * xi - R(1.0));
            x[i] = xi;
            w[i] = R(2.0) / ((R(1.0) - xi * xi) * dp * dp);
        }
    }

    static const gl_rule& get(int n) {
        static const gl_rule r16(16), r32(32), r64(64);
        switch (n) {
            case 16: return r16;
            case 32: return r32;
            default: return r64;
        }
    }
};

} // namespace detail

template <class R, class F>
cplx<R> gl_apply(const F& f, R a, R b, int n) {
    const auto& rule = detail::gl_rule<R>::get(n);
    R half = (b - a) * R(0.5), mid = (b + a) * R(0.5);
    cplx<R> s{R(0.0), R(0.0)};
    for (int i = 0; i < n; ++i)
        s += rule.w[i] * f(mid + half * rule.x[i]);
    return s * half;
}

struct quad_options {
    double abs_tol = 1e-13;
    int max_depth = 28;
};

// Integrate f over [a, b]; error estimate from the GL16/GL32 pair per panel.
template <class R, class F>
cplx<R> integrate(const F& f, R a, R b, const quad_options& opt) {
    struct seg { R a, b; int depth; };
    std::vector<seg> stack{{a, b, 0}};
    cplx<R> total{R(0.0), R(0.0)};
    while (!stack.empty()) {
        seg s = stack.back();
        stack.pop_back();
        cplx<R> lo = gl_apply(f, s.a, s.b, 16);
        cplx<R> hi = gl_apply(f, s.a, s.b, 32);
        double err = to_double(abs(hi - lo));
        if (err < opt.abs_tol || s.depth >= opt.max_depth) {
            total += hi;
            continue;
        }
        R mid = (s.a + s.b) * R(0.5);
        stack.push_back({s.a, mid, s.depth + 1});
        stack.push_back({mid, s.b, s.depth + 1});
    }
    return total;
}

} // namespace qtopo
