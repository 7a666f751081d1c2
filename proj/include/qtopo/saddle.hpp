// Generic multidimensional complex saddle-point estimation:
//   int g e^{r f} ~ (2 pi / r)^{n/2} g(c) e^{r f(c)} / sqrt(-det Hess f(c)),
// with a damped-Newton critical-point finder and Gaussian-lemma validation
// helpers.
#pragma once

#include <functional>
#include <vector>

#include "qtopo/geom.hpp"
#include "qtopo/log_complex.hpp"
#include "qtopo/quadrature.hpp"

namespace qtopo {

struct saddle_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using grad_fn = std::function<std::vector<cd>(const std::vector<cd>&)>;

// Hessian of f from central differences of its gradient.
inline std::vector<std::vector<cd>> fd_hessian(const grad_fn& grad, const std::vector<cd>& z,
                                               double h = 1e-5) {
    size_t d = z.size();
    auto fd = [&](double step) {
        std::vector<std::vector<cd>> H(d, std::vector<cd>(d));
        for (size_t j = 0; j < d; ++j) {
            auto zp = z, zm = z;
            zp[j] += cd(step, 0.0);
            zm[j] -= cd(step, 0.0);
            auto gp = grad(zp), gm = grad(zm);
            for (size_t i = 0; i < d; ++i) H[i][j] = (gp[i] - gm[i]) / (2.0 * step);
        }
        return H;
    };
    auto H1 = fd(h), H2 = fd(h / 2);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) H1[i][j] = (H2[i][j] * 4.0 - H1[i][j]) / 3.0;
    return H1;
}

// Damped Newton for a stationary point of a holomorphic function with
// caller-supplied gradient.
inline std::vector<cd> find_critical(const grad_fn& grad, std::vector<cd> z, double tol = 1e-11,
                                     int max_iter = 80) {
    for (int it = 0; it < max_iter; ++it) {
        auto g = grad(z);
        double gn = 0.0;
        for (auto& gi : g) gn += to_double(abs(gi));
        if (gn < tol) return z;
        auto H = fd_hessian(grad, z);
        for (auto& gi : g) gi = -gi;
        auto dz = detail::solve_linear(H, g);
        double lambda = 1.0;
        for (int bt = 0; bt < 10; ++bt) {
            auto zn = z;
            for (size_t i = 0; i < z.size(); ++i) zn[i] += dz[i] * lambda;
            auto g2 = grad(zn);
            double gsum = 0.0;
            for (auto& gi : g2) gsum += to_double(abs(gi));
            if (gsum < gn || lambda < 1e-3) {
                z = zn;
                break;
            }
            lambda *= 0.5;
        }
    }
    auto g = grad(z);
    double gn = 0.0;
    for (auto& gi : g) gn += to_double(abs(gi));
    if (gn > tol * 100)
        throw saddle_error("find_critical: no convergence (residual " + std::to_string(gn) + ")");
    return z;
}

struct saddle_problem {
    int dimension = 1;
    std::function<cd(const std::vector<cd>&)> f;
    grad_fn grad;
    std::function<cd(const std::vector<cd>&)> g;  // density; default 1
    double r = 1.0;
    std::vector<cd> critical_point;  // supplied or found via find_critical
};

// Leading-order estimate as a log-complex value (the exponent can be large).
// The square root uses the principal branch; callers needing the other sheet
// flip the sign once per continuation path.
inline log_complex<double> saddle_estimate(const saddle_problem& prob) {
    size_t d = size_t(prob.dimension);
    const auto& c = prob.critical_point;
    if (c.size() != d) throw saddle_error("saddle_estimate: bad critical point dimension");
    auto gres = prob.grad(c);
    double gn = 0.0;
    for (auto& gi : gres) gn += to_double(abs(gi));
    if (gn > 1e-8)
        throw saddle_error("saddle_estimate: supplied point is not critical (|grad| = " +
                           std::to_string(gn) + ")");
    auto H = fd_hessian(prob.grad, c);
    cd det = detail::det_lu(H);
    if (to_double(abs(det)) == 0.0) throw saddle_error("saddle_estimate: singular Hessian");
    cd fc = prob.f(c);
    cd gc = prob.g ? prob.g(c) : cd(1.0, 0.0);
    cd root = sqrt(-det);

    // (2 pi / r)^{d/2} g(c) / sqrt(-det H) e^{r f(c)}
    log_complex<double> out = log_complex<double>::from_cplx(gc / root);
    if (out.is_zero()) return out;
    out.logmag += 0.5 * double(d) * std::log(2.0 * pi_d / prob.r);
    out.logmag += prob.r * fc.re;
    out = out * log_complex<double>{0.0, prob.r * fc.im};
    return out;
}

// int_{-eps}^{eps} e^{-r z^2} dz by quadrature (Gaussian-lemma oracle).
inline double gaussian_integral_direct(double r, double eps) {
    quad_options qo;
    qo.abs_tol = 1e-15;
    auto f = [&](double x) { return cd(std::exp(-r * x * x), 0.0); };
    return integrate(f, -eps, eps, qo).re;
}

// int_{-eps}^{eps} z^2 e^{-r z^2} dz minus the closed form (1/2) sqrt(pi / r^3).
inline double verify_second_moment(double r, double eps) {
    quad_options qo;
    qo.abs_tol = 1e-16;
    auto f = [&](double x) { return cd(x * x * std::exp(-r * x * x), 0.0); };
    double direct = integrate(f, -eps, eps, qo).re;
    return std::fabs(direct - 0.5 * std::sqrt(pi_d / (r * r * r)));
}

} // namespace qtopo
