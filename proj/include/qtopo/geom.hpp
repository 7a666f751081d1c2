// Hyperbolic geometry layer: the block potentials U (holomorphic) and V
// (real), the stationary internal variable xi(alpha), truncated-tetrahedron
// volumes with edge lengths, the full potential W over a presentation, its
// critical points, and the extraction of volume, Chern-Simons invariant and
// holonomies from the critical value.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "qtopo/presentation.hpp"
#include "qtopo/special.hpp"

namespace qtopo {

inline constexpr double pi_d = 3.141592653589793238462643383279502884;

struct geom_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// tau_i (triple half-sums) and eta_j (quadruple half-sums) of six slot angles.
template <class T>
struct tau_eta {
    std::array<T, 4> tau;
    std::array<T, 3> eta;

    explicit tau_eta(const std::array<T, 6>& a) {
        for (int i = 0; i < 4; ++i)
            tau[size_t(i)] = (a[size_t(sixj_triples[i][0])] + a[size_t(sixj_triples[i][1])] +
                              a[size_t(sixj_triples[i][2])]) * 0.5;
        for (int j = 0; j < 3; ++j)
            eta[size_t(j)] = (a[size_t(sixj_quads[j][0])] + a[size_t(sixj_quads[j][1])] +
                              a[size_t(sixj_quads[j][2])] + a[size_t(sixj_quads[j][3])]) * 0.5;
    }
};

inline cd log1m_e2i(cd w) {
    // log(1 - e^{2 i w}), principal branch
    cd e = exp(cd(-2.0 * w.im, 2.0 * w.re));
    return log(cd(1.0, 0.0) - e);
}

inline cd li2_e2i(cd w) { return dilog_exp2i<double>(w); }

// Domain check for U: Re(alpha) hyperideal, max Re tau <= Re xi <= min(Re eta, 2 pi).
inline bool in_bh_domain(const std::array<cd, 6>& a, cd xi, double slack = 1e-9) {
    std::array<double, 6> re;
    for (int i = 0; i < 6; ++i) re[size_t(i)] = a[size_t(i)].re;
    if (!hyperideal_angles(re)) return false;
    tau_eta<cd> te(a);
    double lo = -1e300, hi = 2.0 * pi_d;
    for (auto& t : te.tau) lo = std::max(lo, t.re);
    for (auto& e : te.eta) hi = std::min(hi, e.re);
    return xi.re >= lo - slack && xi.re <= hi + slack;
}

// U(alpha, xi): holomorphic block potential.
inline cd U_potential(const std::array<cd, 6>& a, cd xi, bool check_domain = true) {
    if (check_domain && !in_bh_domain(a, xi))
        throw geom_error("U_potential: (alpha, xi) outside the hyperideal domain");
    tau_eta<cd> te(a);
    const cd pi(pi_d, 0.0);
    cd s(pi_d * pi_d, 0.0);
    for (auto& t : te.tau)
        for (auto& e : te.eta) {
            cd d = e - t;
            s += d * d * 0.5;
        }
    for (auto& t : te.tau) {
        cd d = t - pi;
        s -= d * d * 0.5;
    }
    cd dxi = xi - pi;
    s += dxi * dxi;
    for (auto& t : te.tau) {
        cd d = xi - t;
        s -= d * d;
    }
    for (auto& e : te.eta) {
        cd d = e - xi;
        s -= d * d;
    }
    s -= cd(2.0 * pi_d * pi_d / 6.0, 0.0);  // 2 Li2(1)
    for (auto& t : te.tau)
        for (auto& e : te.eta) s -= li2_e2i(e - t) * 0.5;
    for (auto& t : te.tau) s += li2_e2i(t - pi) * 0.5;
    s -= li2_e2i(xi - pi);
    for (auto& t : te.tau) s += li2_e2i(xi - t);
    for (auto& e : te.eta) s += li2_e2i(e - xi);
    return s;
}

// dU/dxi
inline cd dU_dxi(const std::array<cd, 6>& a, cd xi) {
    tau_eta<cd> te(a);
    const cd pi(pi_d, 0.0);
    cd s = (xi - pi) * 2.0;
    for (auto& t : te.tau) s -= (xi - t) * 2.0;
    for (auto& e : te.eta) s += (e - xi) * 2.0;
    const cd twoi(0.0, 2.0);
    s += twoi * log1m_e2i(xi - pi);
    for (auto& t : te.tau) s -= twoi * log1m_e2i(xi - t);
    for (auto& e : te.eta) s += twoi * log1m_e2i(e - xi);
    return s;
}

// dU/d(slot k), k = 0..5
inline std::array<cd, 6> dU_dslots(const std::array<cd, 6>& a, cd xi) {
    tau_eta<cd> te(a);
    const cd pi(pi_d, 0.0);
    const cd i1(0.0, 1.0);
    std::array<cd, 4> dtau;
    std::array<cd, 3> deta;
    for (int i = 0; i < 4; ++i) {
        cd t = te.tau[size_t(i)];
        cd s{0.0, 0.0};
        for (auto& e : te.eta) s -= (e - t);
        s -= (t - pi);
        s += (xi - t) * 2.0;
        for (auto& e : te.eta) s -= i1 * log1m_e2i(e - t);
        s -= i1 * log1m_e2i(t - pi);
        s += cd(0.0, 2.0) * log1m_e2i(xi - t);
        dtau[size_t(i)] = s;
    }
    for (int j = 0; j < 3; ++j) {
        cd e = te.eta[size_t(j)];
        cd s{0.0, 0.0};
        for (auto& t : te.tau) s += (e - t);
        s -= (e - xi) * 2.0;
        for (auto& t : te.tau) s += i1 * log1m_e2i(e - t);
        s -= cd(0.0, 2.0) * log1m_e2i(e - xi);
        deta[size_t(j)] = s;
    }
    std::array<cd, 6> g;
    for (int k = 0; k < 6; ++k) {
        cd s{0.0, 0.0};
        for (int i = 0; i < 4; ++i)
            for (int v : sixj_triples[i])
                if (v == k) s += dtau[size_t(i)] * 0.5;
        for (int j = 0; j < 3; ++j)
            for (int v : sixj_quads[j])
                if (v == k) s += deta[size_t(j)] * 0.5;
        g[size_t(k)] = s;
    }
    return g;
}

// Real potential V on B_H; equals Im(U)/2 there (U = 2 pi^2 + 2 i V).
inline double V_potential(const std::array<double, 6>& a, double xi) {
    tau_eta<double> te(a);
    auto delta3 = [](double x, double y, double z) {
        return 0.5 * (-lobachevsky((x + y - z) / 2) - lobachevsky((y + z - x) / 2) -
                      lobachevsky((z + x - y) / 2) + lobachevsky((x + y + z) / 2));
    };
    double s = 0.0;
    for (auto& t : sixj_triples)
        s += delta3(a[size_t(t[0])], a[size_t(t[1])], a[size_t(t[2])]);
    s -= lobachevsky(xi);
    for (auto& t : te.tau) s += lobachevsky(xi - t);
    for (auto& e : te.eta) s += lobachevsky(e - xi);
    return s;
}

inline double dV_dxi(const std::array<double, 6>& a, double xi) {
    tau_eta<double> te(a);
    auto lp = [](double t) { return -std::log(std::fabs(2.0 * std::sin(t))); };
    double s = -lp(xi);
    for (auto& t : te.tau) s += lp(xi - t);
    for (auto& e : te.eta) s -= lp(e - xi);
    return s;
}

struct xi_options {
    double tol = 1e-13;
    int max_iter = 80;
    double im_guard = 0.3;
};

// Stationary xi for real hyperideal angles: V is strictly concave in xi on
// (max tau, min(eta, 2 pi)), so safeguarded Newton/bisection cannot fail.
inline double xi_of_alpha_real(const std::array<double, 6>& a, const xi_options& opt = {}) {
    if (!hyperideal_angles(a))
        throw geom_error("xi_of_alpha: angles not of hyperideal type");
    tau_eta<double> te(a);
    double lo = *std::max_element(te.tau.begin(), te.tau.end());
    double hi = std::min(2.0 * pi_d, *std::min_element(te.eta.begin(), te.eta.end()));
    double margin = 1e-12 * (hi - lo) + 1e-14;
    double a0 = lo + margin, b0 = hi - margin;
    // derivative is +inf at lo and -inf at hi; bisect to a sign change bracket
    double x = 0.5 * (a0 + b0);
    for (int it = 0; it < opt.max_iter; ++it) {
        double g = dV_dxi(a, x);
        auto lcot = [](double t) { return std::cos(t) / std::sin(t); };
        tau_eta<double> te2(a);
        double gp = lcot(x);
        for (auto& t : te2.tau) gp -= lcot(x - t);
        for (auto& e : te2.eta) gp -= lcot(e - x);
        double step = g / gp;
        double xn = x - step;
        if (!(xn > a0 && xn < b0)) {
            if (g > 0) a0 = x; else b0 = x;
            xn = 0.5 * (a0 + b0);
        } else {
            if (g > 0) a0 = x; else b0 = x;
        }
        if (std::fabs(xn - x) < opt.tol) return xn;
        x = xn;
    }
    return x;
}

// Stationary xi for complex angles: Newton on dU/dxi seeded from the real part.
inline cd xi_of_alpha(const std::array<cd, 6>& a, const xi_options& opt = {}) {
    double max_im = 0.0;
    std::array<double, 6> re;
    for (int i = 0; i < 6; ++i) {
        re[size_t(i)] = a[size_t(i)].re;
        max_im = std::max(max_im, std::fabs(a[size_t(i)].im));
    }
    if (max_im > opt.im_guard)
        throw geom_error("xi_of_alpha: imaginary parts exceed the guard");
    cd xi(xi_of_alpha_real(re, opt), 0.0);
    if (max_im == 0.0) return xi;
    for (int it = 0; it < opt.max_iter; ++it) {
        cd g = dU_dxi(a, xi);
        double h = 1e-6;
        cd gp = (dU_dxi(a, xi + cd(h, 0.0)) - dU_dxi(a, xi - cd(h, 0.0))) / 2.0 / h;
        cd step = g / gp;
        xi = xi - step;
        if (abs(step) < opt.tol) break;
    }
    if (abs(dU_dxi(a, xi)) > 1e-10)
        throw geom_error("xi_of_alpha: Newton did not reach the stationarity tolerance");
    return xi;
}

struct tet_result {
    double volume = 0.0;
    std::array<double, 6> edge_lengths{};
    double xi = 0.0;
    bool cusp_degenerate = false;  // some length at the cusp limit ~ 0
};

// Volume of the truncated hyperideal tetrahedron with cone angles theta
// (slot angles alpha_i = pi - theta_i / 2), plus edge lengths from the
// derivative of U through the stationary xi.
inline tet_result tet_volume(const std::array<double, 6>& theta) {
    std::array<double, 6> a;
    std::array<cd, 6> ac;
    for (int i = 0; i < 6; ++i) {
        if (theta[size_t(i)] < 0.0) throw geom_error("tet_volume: negative angle");
        a[size_t(i)] = pi_d - theta[size_t(i)] / 2.0;
        ac[size_t(i)] = cd(a[size_t(i)], 0.0);
    }
    if (!hyperideal_angles(a))
        throw geom_error("tet_volume: angles not of hyperideal type");
    tet_result res;
    res.xi = xi_of_alpha_real(a);
    res.volume = V_potential(a, res.xi);
    auto g = dU_dslots(ac, cd(res.xi, 0.0));
    for (int i = 0; i < 6; ++i) {
        cd l = cd(0.0, -1.0) * g[size_t(i)];  // -i dU/dalpha = 2 dV/dalpha
        res.edge_lengths[size_t(i)] = l.re;
        if (std::fabs(l.re) < 1e-8) res.cusp_degenerate = true;
    }
    return res;
}

// ---------------------------------------------------------------------------
// The potential W over a presentation with a partition (I, J).

struct potential_spec {
    fsl_presentation pres;
    std::vector<int> I;            // solved component ids (may be empty)
    std::map<int, long> q;         // framings on I
    std::vector<int> eps;          // sign per entry of I
    std::map<int, double> beta;    // fixed beta_i, i in I
    std::map<int, double> alphaJ;  // fixed alpha_j, j in J
    double small_angle_guard = 0.3;

    int dim() const { return int(I.size()) + pres.c; }

    bool in_theorem_range() const {
        for (auto& [_, b] : beta)
            if (std::fabs(b - pi_d) > small_angle_guard) return false;
        for (auto& [_, v] : alphaJ)
            if (std::fabs(v - pi_d) > small_angle_guard) return false;
        return true;
    }

    // Build from per-component cone-angle targets (alpha = pi - theta/2 branch).
    static potential_spec from_angles(const fsl_presentation& pres, const std::vector<int>& I,
                                      const std::map<int, long>& q,
                                      const std::map<int, double>& theta,
                                      const std::vector<int>& eps_signs = {}) {
        potential_spec s;
        s.pres = pres;
        s.I = I;
        s.q = q;
        s.eps.assign(I.size(), +1);
        for (size_t k = 0; k < eps_signs.size() && k < I.size(); ++k) s.eps[k] = eps_signs[k];
        for (const auto& ci : pres.components) {
            double th = 0.0;
            if (auto it = theta.find(ci.id); it != theta.end()) th = it->second;
            double ang = pi_d - th / 2.0;
            if (std::find(I.begin(), I.end(), ci.id) != I.end())
                s.beta[ci.id] = ang;
            else
                s.alphaJ[ci.id] = ang;
        }
        return s;
    }
};

namespace detail {

struct w_workspace {
    // slot angle values per block given the current unknowns
    const potential_spec* spec;
    std::map<int, cd> alpha_of;  // current component angle (I: unknown, J: fixed)

    void load(const potential_spec& s, const std::vector<cd>& z) {
        spec = &s;
        alpha_of.clear();
        for (size_t k = 0; k < s.I.size(); ++k) alpha_of[s.I[k]] = z[k];
        for (auto& [id, v] : s.alphaJ) alpha_of[id] = cd(v, 0.0);
    }
};

} // namespace detail

// W(z) with z = (alpha_i)_{i in I} ++ (xi_s); returns value and gradient.
inline void W_potential_eval(const potential_spec& spec, const std::vector<cd>& z, cd* value,
                             std::vector<cd>* grad, bool check_domain = true) {
    const auto& pres = spec.pres;
    int nI = int(spec.I.size());
    if (int(z.size()) != spec.dim())
        throw geom_error("W_potential: wrong number of unknowns");
    detail::w_workspace ws;
    ws.load(spec, z);

    cd val{0.0, 0.0};
    if (grad) grad->assign(size_t(spec.dim()), cd{0.0, 0.0});

    const cd pi(pi_d, 0.0);
    long iota_sum = 0;
    // quadratic terms
    for (size_t k = 0; k < spec.I.size(); ++k) {
        int id = spec.I[k];
        double b = spec.beta.at(id);
        cd ai = ws.alpha_of.at(id);
        double eps = double(spec.eps[k]);
        long qi = spec.q.at(id);
        long pi_fr = pres.component(id).p;
        cd da = ai - pi;
        val -= cd(double(qi) * (b - pi_d) * (b - pi_d), 0.0);
        val -= da * da * double(pi_fr);
        val -= da * (2.0 * eps * (b - pi_d));
        if (grad) {
            (*grad)[k] += da * (-2.0 * double(pi_fr)) - cd(2.0 * eps * (b - pi_d), 0.0);
        }
    }
    for (const auto& ci : pres.components) {
        iota_sum += ci.iota;
        cd da = ws.alpha_of.at(ci.id) - pi;
        val -= da * da * (0.5 * double(ci.iota));
        bool inI = std::find(spec.I.begin(), spec.I.end(), ci.id) != spec.I.end();
        if (inI) {
            // J components' p-terms handled here too, I handled above
            size_t k = size_t(std::find(spec.I.begin(), spec.I.end(), ci.id) - spec.I.begin());
            if (grad) (*grad)[k] -= da * double(ci.iota);
        } else {
            val -= da * da * double(ci.p);
        }
    }
    val += cd(0.5 * double(iota_sum) * pi_d * pi_d, 0.0);

    // blocks
    for (int s = 0; s < pres.c; ++s) {
        std::array<cd, 6> a;
        for (int sl = 0; sl < 6; ++sl)
            a[size_t(sl)] = ws.alpha_of.at(pres.blocks[size_t(s)][size_t(sl)]);
        cd xi = z[size_t(nI + s)];
        val += U_potential(a, xi, check_domain);
        if (grad) {
            auto g = dU_dslots(a, xi);
            for (int sl = 0; sl < 6; ++sl) {
                int id = pres.blocks[size_t(s)][size_t(sl)];
                auto it = std::find(spec.I.begin(), spec.I.end(), id);
                if (it != spec.I.end())
                    (*grad)[size_t(it - spec.I.begin())] += g[size_t(sl)];
            }
            (*grad)[size_t(nI + s)] += dU_dxi(a, xi);
        }
    }
    if (value) *value = val;
}

inline cd W_potential(const potential_spec& spec, const std::vector<cd>& z) {
    cd v;
    W_potential_eval(spec, z, &v, nullptr);
    return v;
}

// Reduce x into (-pi^2/2, pi^2/2] modulo pi^2.
inline double reduce_mod_pi2(double x) {
    const double p2 = pi_d * pi_d;
    double y = std::remainder(x, p2);
    if (y <= -p2 / 2) y += p2;
    return y;
}

struct critical_result {
    std::vector<cd> z;                 // (alpha_I, xi_1..xi_c)
    cd value{};                        // W at the critical point
    double vol = 0.0;                  // Im(value - 2 c pi^2)
    double cs = 0.0;                   // -Re(value - 2 c pi^2) mod pi^2 in (-pi^2/2, pi^2/2]
    cd hess_det{};                     // det of the (|I|+c)^2 Hessian of W
    std::vector<std::vector<cd>> hess; // the Hessian itself
    std::map<int, cd> holonomy_u, holonomy_v;
    std::map<int, double> dehn_residual;
    std::vector<std::array<double, 6>> edge_lengths;  // per block, Re of complex length
    std::map<int, double> component_length;           // sum over the component's slots
    double grad_residual = 0.0;
    bool converged = false;
    bool in_theorem_range = true;
    bool cusp_degenerate = false;
};

namespace detail {

// Solve H x = b for small complex systems (partial-pivot LU).
inline std::vector<cd> solve_linear(std::vector<std::vector<cd>> H, std::vector<cd> b) {
    size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t rr = col + 1; rr < n; ++rr)
            if (norm2(H[rr][col]) > norm2(H[piv][col])) piv = rr;
        std::swap(H[col], H[piv]);
        std::swap(b[col], b[piv]);
        if (norm2(H[col][col]) == 0.0) throw geom_error("singular Hessian in Newton step");
        for (size_t rr = col + 1; rr < n; ++rr) {
            cd f = H[rr][col] / H[col][col];
            for (size_t cc = col; cc < n; ++cc) H[rr][cc] -= f * H[col][cc];
            b[rr] -= f * b[col];
        }
    }
    std::vector<cd> x(n);
    for (size_t rr = n; rr-- > 0;) {
        cd s = b[rr];
        for (size_t cc = rr + 1; cc < n; ++cc) s -= H[rr][cc] * x[cc];
        x[rr] = s / H[rr][rr];
    }
    return x;
}

inline cd det_lu(std::vector<std::vector<cd>> H) {
    size_t n = H.size();
    cd det(1.0, 0.0);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t rr = col + 1; rr < n; ++rr)
            if (norm2(H[rr][col]) > norm2(H[piv][col])) piv = rr;
        if (piv != col) {
            std::swap(H[col], H[piv]);
            det = -det;
        }
        det = det * H[col][col];
        if (norm2(H[col][col]) == 0.0) return {0.0, 0.0};
        for (size_t rr = col + 1; rr < n; ++rr) {
            cd f = H[rr][col] / H[col][col];
            for (size_t cc = col; cc < n; ++cc) H[rr][cc] -= f * H[col][cc];
        }
    }
    return det;
}

} // namespace detail

// Finite-difference Hessian of W (central differences of the analytic
// gradient, one Richardson refinement).
inline std::vector<std::vector<cd>> W_hessian(const potential_spec& spec, const std::vector<cd>& z,
                                              double h = 1e-5) {
    int d = spec.dim();
    auto fd = [&](double step) {
        std::vector<std::vector<cd>> H(size_t(d), std::vector<cd>(size_t(d)));
        for (int j = 0; j < d; ++j) {
            auto zp = z, zm = z;
            zp[size_t(j)] += cd(step, 0.0);
            zm[size_t(j)] -= cd(step, 0.0);
            std::vector<cd> gp, gm;
            W_potential_eval(spec, zp, nullptr, &gp, false);
            W_potential_eval(spec, zm, nullptr, &gm, false);
            for (int i = 0; i < d; ++i)
                H[size_t(i)][size_t(j)] = (gp[size_t(i)] - gm[size_t(i)]) / (2.0 * step);
        }
        return H;
    };
    auto H1 = fd(h), H2 = fd(h / 2);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            H1[size_t(i)][size_t(j)] =
                (H2[size_t(i)][size_t(j)] * 4.0 - H1[size_t(i)][size_t(j)]) / 3.0;
    return H1;
}

struct solve_options {
    double grad_tol = 1e-11;
    int max_newton = 60;
    int path_steps = 10;
};

// Damped Newton with continuation in the cone angles, seeded at the symmetric
// point (pi, ..., pi, 7pi/4, ..., 7pi/4).
inline critical_result solve_critical(const potential_spec& spec, const solve_options& opt = {}) {
    critical_result res;
    res.in_theorem_range = spec.in_theorem_range();
    int d = spec.dim();
    int nI = int(spec.I.size());

    std::vector<cd> z(size_t(d));
    for (int k = 0; k < nI; ++k) z[size_t(k)] = cd(pi_d, 0.0);
    for (int s = 0; s < spec.pres.c; ++s) z[size_t(nI + s)] = cd(7.0 * pi_d / 4.0, 0.0);

    potential_spec path = spec;
    for (int step = 1; step <= opt.path_steps; ++step) {
        double t = double(step) / opt.path_steps;
        for (auto& [id, b] : path.beta) b = pi_d + t * (spec.beta.at(id) - pi_d);
        for (auto& [id, v] : path.alphaJ) v = pi_d + t * (spec.alphaJ.at(id) - pi_d);
        bool done = false;
        for (int it = 0; it < opt.max_newton && !done; ++it) {
            std::vector<cd> g;
            W_potential_eval(path, z, nullptr, &g, false);
            double gn = 0.0;
            for (auto& gi : g) gn += to_double(abs(gi));
            if (gn < opt.grad_tol) { done = true; break; }
            auto H = W_hessian(path, z);
            auto neg = g;
            for (auto& v : neg) v = -v;
            auto dz = detail::solve_linear(H, neg);
            double lambda = 1.0;
            for (int bt = 0; bt < 8; ++bt) {
                auto zn = z;
                for (int i = 0; i < d; ++i) zn[size_t(i)] += dz[size_t(i)] * lambda;
                std::vector<cd> gn2;
                try {
                    W_potential_eval(path, zn, nullptr, &gn2, false);
                } catch (const geom_error&) {
                    lambda *= 0.5;
                    continue;
                }
                double gsum = 0.0;
                for (auto& gi : gn2) gsum += to_double(abs(gi));
                if (gsum < gn || lambda < 0.02) {
                    z = zn;
                    break;
                }
                lambda *= 0.5;
            }
        }
    }

    std::vector<cd> g;
    W_potential_eval(spec, z, &res.value, &g, false);
    res.grad_residual = 0.0;
    for (auto& gi : g) res.grad_residual = std::max(res.grad_residual, to_double(abs(gi)));
    res.converged = res.grad_residual < 1e-9;
    if (!res.converged)
        throw geom_error("solve_critical: Newton did not converge (residual " +
                         std::to_string(res.grad_residual) + ")");
    res.z = z;

    double two_c_pi2 = 2.0 * spec.pres.c * pi_d * pi_d;
    res.vol = res.value.im;
    res.cs = reduce_mod_pi2(-(res.value.re - two_c_pi2));

    res.hess = W_hessian(spec, z);
    res.hess_det = detail::det_lu(res.hess);

    // Per-block edge data at the critical point.
    detail::w_workspace ws;
    ws.load(spec, z);
    std::map<int, cd> dU_by_component;
    for (int s = 0; s < spec.pres.c; ++s) {
        std::array<cd, 6> a;
        for (int sl = 0; sl < 6; ++sl)
            a[size_t(sl)] = ws.alpha_of.at(spec.pres.blocks[size_t(s)][size_t(sl)]);
        cd xi = z[size_t(nI + s)];
        auto gs = dU_dslots(a, xi);
        std::array<double, 6> lens;
        for (int sl = 0; sl < 6; ++sl) {
            int id = spec.pres.blocks[size_t(s)][size_t(sl)];
            cd l = cd(0.0, -1.0) * gs[size_t(sl)];
            lens[size_t(sl)] = l.re;
            res.component_length[id] += l.re;
            dU_by_component[id] += gs[size_t(sl)];
            if (std::fabs(l.re) < 1e-8) res.cusp_degenerate = true;
        }
        res.edge_lengths.push_back(lens);
    }

    // Holonomies and Dehn-filling residuals.
    for (size_t k = 0; k < spec.I.size(); ++k) {
        int id = spec.I[k];
        double b = spec.beta.at(id);
        double mu = b >= pi_d ? 1.0 : -1.0;
        double eps = double(spec.eps[k]);
        double theta = 2.0 * std::fabs(b - pi_d);
        cd da = z[k] - cd(pi_d, 0.0);
        cd Hu = cd(0.0, -2.0 * eps * mu) * da;
        const auto& ci = spec.pres.component(id);
        cd dU = dU_by_component[id] - da * double(ci.iota);
        cd Hv = cd(0.0, eps * mu) * dU;
        res.holonomy_u[id] = Hu;
        res.holonomy_v[id] = Hv;
        cd resid = Hu * double(ci.p) + Hv - cd(0.0, theta);
        res.dehn_residual[id] = to_double(abs(resid));
    }
    for (auto& [id, v] : spec.alphaJ) {
        double mu = v >= pi_d ? 1.0 : -1.0;
        double theta = 2.0 * std::fabs(v - pi_d);
        res.holonomy_u[id] = cd(0.0, theta);
        cd da = cd(v - pi_d, 0.0);
        const auto& ci = spec.pres.component(id);
        cd dU = dU_by_component[id] - da * double(ci.iota);
        res.holonomy_v[id] = cd(0.0, -mu) * dU;
        res.dehn_residual[id] = 0.0;  // H(u_j) = i theta_j holds by construction
    }
    return res;
}

// Finite-difference second partials of Im W for a single block whose six
// slots carry six distinct components (framings zero), at the symmetric point
// (pi,...,pi, 7pi/4).  On the real slice Im W equals 2 V.  The matrix is
// indexed (alpha_1..alpha_6, xi).
struct hessian_probe_result {
    std::array<std::array<double, 7>, 7> im_w;  // Hessian of Im W = 2 V
    std::array<std::array<double, 7>, 7> v;     // Hessian of V (half of the above)
};

inline hessian_probe_result hessian_probe(double h = 1e-4) {
    auto f = [&](const std::array<double, 7>& x) {
        std::array<double, 6> a;
        for (int i = 0; i < 6; ++i) a[size_t(i)] = x[size_t(i)];
        return 2.0 * V_potential(a, x[6]);
    };
    std::array<double, 7> x0;
    x0.fill(pi_d);
    x0[6] = 7.0 * pi_d / 4.0;
    hessian_probe_result res{};
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            double v;
            if (i == j) {
                auto xp = x0, xm = x0;
                xp[size_t(i)] += h;
                xm[size_t(i)] -= h;
                v = (f(xp) - 2.0 * f(x0) + f(xm)) / (h * h);
            } else {
                auto xpp = x0, xpm = x0, xmp = x0, xmm = x0;
                xpp[size_t(i)] += h; xpp[size_t(j)] += h;
                xpm[size_t(i)] += h; xpm[size_t(j)] -= h;
                xmp[size_t(i)] -= h; xmp[size_t(j)] += h;
                xmm[size_t(i)] -= h; xmm[size_t(j)] -= h;
                v = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
            }
            res.im_w[size_t(i)][size_t(j)] = v;
            res.v[size_t(i)][size_t(j)] = v / 2.0;
        }
    return res;
}

} // namespace qtopo
