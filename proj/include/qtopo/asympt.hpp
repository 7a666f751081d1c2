// Growth-rate verification: color sequences realizing target cone angles,
// tables of (4 pi / r) log RT with unwrapped phases, least-squares limit
// extrapolation, the finite-r potential built from the quantum dilogarithm,
// and the leading-order saddle prediction compared against exact invariants.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qtopo/fsl.hpp"
#include "qtopo/geom.hpp"
#include "qtopo/qdilog.hpp"
#include "qtopo/saddle.hpp"

namespace qtopo {

enum class color_branch { below, above };

// Nearest even integer to r (2 pi -+ theta) / (4 pi), clamped to I_r.
// Exact odd-integer ties round down.
inline long color_for_angle(int r, double theta, color_branch branch = color_branch::below) {
    double target = branch == color_branch::below ? (2.0 * pi_d - theta) : (2.0 * pi_d + theta);
    double x = r * target / (4.0 * pi_d);
    long m = 2 * long(std::ceil(x / 2.0 - 0.5));
    if (m < 0) m = 0;
    if (m > r - 3) m = r - 3;
    return m;
}

inline double realized_angle(int r, long m) {
    return std::fabs(2.0 * pi_d - 4.0 * pi_d * double(m) / double(r));
}

struct growth_row {
    int r = 0;
    cd value{};                    // (4 pi / r) log RT, phase unwrapped
    std::vector<long> colors;      // full coloring used (I then J order for cop)
    std::vector<double> realized;  // realized angles per component
    bool zero = false;             // invariant vanished at this row
};

struct growth_table {
    std::vector<growth_row> rows;
};

struct growth_options {
    rt_cop_options cop_opt{};
    color_branch branch = color_branch::below;
};

// Table of (4 pi / r) log RT over an increasing list of odd r.  theta gives
// one target cone angle per component (presentation order).  With a cop block
// the invariant is the change-of-pair one, otherwise the plain presentation
// invariant.
template <class R>
growth_table growth_series(const fsl_presentation& pres, const std::optional<change_of_pair>& cop,
                           const std::vector<double>& theta, const std::vector<int>& r_list,
                           const growth_options& opt = {}) {
    if (int(theta.size()) != pres.n_components())
        throw bad_input("growth_series: one theta target per component");
    growth_table tab;
    double prev_im = 0.0;
    bool have_prev = false;
    for (int r : r_list) {
        if (r % 2 == 0) throw bad_input("growth_series: r must be odd");
        root_context<R> ctx(r);
        growth_row row;
        row.r = r;
        log_complex<R> v;
        if (cop) {
            std::vector<long> n_I, m_J;
            std::vector<double> realized;
            size_t pos = 0;
            std::vector<long> all;
            for (const auto& ci : pres.components) {
                long m = color_for_angle(r, theta[pos], opt.branch);
                bool inI = std::find(cop->I.begin(), cop->I.end(), ci.id) != cop->I.end();
                (inI ? n_I : m_J).push_back(m);
                all.push_back(m);
                realized.push_back(realized_angle(r, m));
                ++pos;
            }
            row.colors = all;
            row.realized = realized;
            v = rt_cop(ctx, pres, *cop, n_I, m_J, opt.cop_opt).value;
        } else {
            std::vector<long> colors;
            for (size_t i = 0; i < theta.size(); ++i) {
                long m = color_for_angle(r, theta[i], opt.branch);
                colors.push_back(m);
                row.realized.push_back(realized_angle(r, m));
            }
            row.colors = colors;
            v = rt_fsl(ctx, pres, colors);
        }
        if (v.is_zero()) {
            row.zero = true;
            tab.rows.push_back(row);
            continue;
        }
        double scale = 4.0 * pi_d / r;
        double re = scale * to_double(v.logmag);
        double ph = to_double(v.phase);
        double im = scale * ph;
        if (have_prev) {
            // unwrap: the admissible values differ by multiples of scale * 2 pi
            double step = scale * 2.0 * pi_d;
            double k = std::round((prev_im - im) / step);
            im += k * step;
        }
        row.value = cd(re, im);
        prev_im = im;
        have_prev = true;
        tab.rows.push_back(row);
    }
    return tab;
}

struct fit_result {
    cd limit{};       // a
    cd coeff_log{};   // b in a + b log r / r + c / r
    cd coeff_inv{};   // c
    double residual = 0.0;
    int rows_used = 0;
};

// Least squares for y(r) = a + b log r / r + c / r on the non-zero rows.
inline fit_result fit_limit(const growth_table& tab) {
    std::vector<double> rs;
    std::vector<cd> ys;
    for (const auto& row : tab.rows)
        if (!row.zero) {
            rs.push_back(double(row.r));
            ys.push_back(row.value);
        }
    size_t n = rs.size();
    if (n < 5) throw bad_input("fit_limit: need at least 5 usable rows");
    // normal equations for the 3-parameter model, solved per component
    double A[3][3] = {};
    cd b[3] = {};
    for (size_t k = 0; k < n; ++k) {
        double phi[3] = {1.0, std::log(rs[k]) / rs[k], 1.0 / rs[k]};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += phi[i] * phi[j];
            b[i] += ys[k] * phi[i];
        }
    }
    // 3x3 LU
    double M[3][3];
    cd rhs[3];
    for (int i = 0; i < 3; ++i) {
        rhs[i] = b[i];
        for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int rr = col + 1; rr < 3; ++rr)
            if (std::fabs(M[rr][col]) > std::fabs(M[piv][col])) piv = rr;
        if (std::fabs(M[piv][col]) < 1e-14) throw bad_input("fit_limit: rank-deficient design");
        if (piv != col) {
            for (int cc = 0; cc < 3; ++cc) std::swap(M[col][cc], M[piv][cc]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (int rr = col + 1; rr < 3; ++rr) {
            double f = M[rr][col] / M[col][col];
            for (int cc = col; cc < 3; ++cc) M[rr][cc] -= f * M[col][cc];
            rhs[rr] -= rhs[col] * f;
        }
    }
    cd sol[3];
    for (int rr = 3; rr-- > 0;) {
        cd s = rhs[rr];
        for (int cc = rr + 1; cc < 3; ++cc) s -= sol[cc] * M[rr][cc];
        sol[rr] = s / M[rr][rr];
    }
    fit_result res;
    res.limit = sol[0];
    res.coeff_log = sol[1];
    res.coeff_inv = sol[2];
    res.rows_used = int(n);
    double ss = 0.0;
    for (size_t k = 0; k < n; ++k) {
        double phi[3] = {1.0, std::log(rs[k]) / rs[k], 1.0 / rs[k]};
        cd fit = sol[0] * phi[0] + sol[1] * phi[1] + sol[2] * phi[2];
        ss += norm2(ys[k] - fit);
    }
    res.residual = std::sqrt(ss);
    return res;
}

// ---------------------------------------------------------------------------
// Finite-r potential W_r (U_r built from phi_r instead of Li2).

inline cd U_r_potential(int r, const std::array<cd, 6>& a, cd xi, const phi_options& opt = {}) {
    tau_eta<cd> te(a);
    const cd pi(pi_d, 0.0);
    const double tpr = 2.0 * pi_d / r;
    auto phi = [&](cd z) { return phi_r_extended<double>(r, z, opt); };
    cd s(pi_d * pi_d - tpr * tpr, 0.0);
    for (auto& t : te.tau)
        for (auto& e : te.eta) {
            cd d = e - t;
            s += d * d * 0.5;
        }
    for (auto& t : te.tau) {
        cd d = t + cd(tpr, 0.0) - pi;
        s -= d * d * 0.5;
    }
    cd dxi = xi + cd(tpr, 0.0) - pi;
    s += dxi * dxi;
    for (auto& t : te.tau) {
        cd d = xi - t;
        s -= d * d;
    }
    for (auto& e : te.eta) {
        cd d = e - xi;
        s -= d * d;
    }
    s -= phi(cd(pi_d / r, 0.0)) * 2.0;
    for (auto& t : te.tau)
        for (auto& e : te.eta) s -= phi(e - t + cd(pi_d / r, 0.0)) * 0.5;
    for (auto& t : te.tau) s += phi(t - pi + cd(3.0 * pi_d / r, 0.0)) * 0.5;
    s -= phi(xi - pi + cd(3.0 * pi_d / r, 0.0));
    for (auto& t : te.tau) s += phi(xi - t + cd(pi_d / r, 0.0));
    for (auto& e : te.eta) s += phi(e - xi + cd(pi_d / r, 0.0));
    return s;
}

// W_r over the presentation: same quadratic terms as W, U replaced by U_r.
inline cd W_r_potential(int r, const potential_spec& spec, const std::vector<cd>& z,
                        const phi_options& opt = {}) {
    cd w_full;
    std::vector<cd> dummy;
    W_potential_eval(spec, z, &w_full, nullptr, false);
    // subtract the U blocks and add U_r blocks
    detail::w_workspace ws;
    ws.load(spec, z);
    int nI = int(spec.I.size());
    for (int s = 0; s < spec.pres.c; ++s) {
        std::array<cd, 6> a;
        for (int sl = 0; sl < 6; ++sl)
            a[size_t(sl)] = ws.alpha_of.at(spec.pres.blocks[size_t(s)][size_t(sl)]);
        cd xi = z[size_t(nI + s)];
        w_full = w_full - U_potential(a, xi, false) + U_r_potential(r, a, xi, opt);
    }
    return w_full;
}

// The 1/r correction function kappa appearing in W_r = W - (4 c pi i / r) log(r/2)
// + (4 pi i / r) kappa + O(1/r^2).
inline cd kappa_correction(const potential_spec& spec, const std::vector<cd>& z) {
    detail::w_workspace ws;
    ws.load(spec, z);
    int nI = int(spec.I.size());
    cd total{0.0, 0.0};
    const cd pi(pi_d, 0.0);
    const cd i1(0.0, 1.0);
    for (int s = 0; s < spec.pres.c; ++s) {
        std::array<cd, 6> a;
        for (int sl = 0; sl < 6; ++sl)
            a[size_t(sl)] = ws.alpha_of.at(spec.pres.blocks[size_t(s)][size_t(sl)]);
        cd xi = z[size_t(nI + s)];
        tau_eta<cd> te(a);
        cd k{0.0, 0.0};
        for (auto& t : te.tau) k += i1 * t * 0.5;
        k -= i1 * xi;
        k -= i1 * (1.5 * pi_d);
        for (auto& t : te.tau)
            for (auto& e : te.eta) k += log1m_e2i(e - t) * 0.25;
        for (auto& t : te.tau) k -= log1m_e2i(t - pi) * 0.75;
        k += log1m_e2i(xi - pi) * 1.5;
        for (auto& t : te.tau) k -= log1m_e2i(xi - t) * 0.5;
        for (auto& e : te.eta) k -= log1m_e2i(e - xi) * 0.5;
        total += k;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Leading-order prediction of RT (Prop.-style saddle estimate) vs the exact
// state sum.

struct prediction_result {
    log_complex<double> predicted;
    log_complex<double> exact;
    cd ratio{};          // predicted / exact
    int sqrt_sign = +1;  // resolved branch of sqrt(-det Hess)
    std::vector<critical_result> solves;  // one per epsilon assignment
};

namespace detail {

// kappa_r phase factor, exactly reduced:
//   e^{(-sigma(-3/r - (r+1)/4) - (r/4)(sum q + sum p + 2|I|)) i pi}
inline log_complex<double> kappa_r_prefactor(int r, const fsl_presentation& pres,
                                             const change_of_pair& cop) {
    long S = 2 * long(cop.I.size());
    for (const auto& ci : pres.components) S += ci.p;
    for (int id : cop.I) S += cop.q.at(id);
    long k8 = ((cop.sigma * (r + 1) - r * S) % 8 + 8) % 8;
    double ph = pi_d * double(k8) / 4.0 + 3.0 * pi_d * double(cop.sigma) / double(r);
    long nI = long(cop.I.size());
    long c = pres.c;
    // 2^{|I|-2c} (sin(2 pi / r)/sqrt r)^{|I|-c} / {1}^{|I|-c};  {1} = 2 i sin(2 pi / r)
    double s1 = std::sin(2.0 * pi_d / r);
    double lm = double(nI - 2 * c) * std::log(2.0) +
                double(nI - c) * (std::log(s1) - 0.5 * std::log(double(r))) -
                double(nI - c) * std::log(2.0 * s1);
    double curly_phase = -double(nI - c) * pi_d / 2.0;  // / i^{|I|-c}
    return log_complex<double>{lm, ph + curly_phase};
}

} // namespace detail

// Compare the saddle leading term against the exact invariant at one r.
// `sign` persists the sqrt-branch calibration across calls: pass 0 to
// calibrate at this r (by matching the exact value), +-1 to reuse.
template <class R = double>
prediction_result leading_prediction(const fsl_presentation& pres, const change_of_pair& cop,
                                     const std::vector<double>& theta, int r, int& sign,
                                     const rt_cop_options& cop_opt = {},
                                     color_branch branch = color_branch::below) {
    if (r % 2 == 0) throw bad_input("leading_prediction: r must be odd");
    root_context<R> ctx(r);

    // realized colors and angles
    std::vector<long> n_I, m_J;
    std::map<int, double> beta_of, alphaJ_of;
    size_t pos = 0;
    for (const auto& ci : pres.components) {
        long m = color_for_angle(r, theta[pos], branch);
        double ang = 2.0 * pi_d * double(m) / double(r);
        bool inI = std::find(cop.I.begin(), cop.I.end(), ci.id) != cop.I.end();
        if (inI) {
            n_I.push_back(m);
            beta_of[ci.id] = ang;
        } else {
            m_J.push_back(m);
            alphaJ_of[ci.id] = ang;
        }
        ++pos;
    }

    auto exact = rt_cop(ctx, pres, cop, n_I, m_J, cop_opt).value;

    const int nI = int(cop.I.size());
    const int c = pres.c;
    const int d = nI + c;

    // base spec; epsilon varies below
    potential_spec spec;
    spec.pres = pres;
    spec.I = cop.I;
    for (int id : cop.I) spec.q[id] = cop.q.at(id);
    spec.beta = beta_of;
    spec.alphaJ = alphaJ_of;

    log_sum<double> total;
    prediction_result out;
    for (long mask = 0; mask < (1L << nI); ++mask) {
        spec.eps.assign(size_t(nI), +1);
        for (int k = 0; k < nI; ++k)
            if (mask & (1L << k)) spec.eps[size_t(k)] = -1;
        auto crit = solve_critical(spec);

        // g = e^{i(sum q_i beta_i + sum (p_i + iota_i/2) alpha_i + sum eps_i (alpha_i + beta_i))
        //        + 2 pi i sum eps_i / r} e^{kappa}
        cd lin{0.0, 0.0};
        double eps_sum = 0.0;
        for (int k = 0; k < nI; ++k) {
            int id = cop.I[size_t(k)];
            lin += cd(double(cop.q.at(id)) * beta_of[id], 0.0);
            cd ai = crit.z[size_t(k)];
            lin += ai * double(spec.eps[size_t(k)]) + cd(double(spec.eps[size_t(k)]) * beta_of[id], 0.0);
            eps_sum += double(spec.eps[size_t(k)]);
        }
        for (const auto& ci : pres.components) {
            double pf = double(ci.p) + 0.5 * double(ci.iota);
            auto it = std::find(cop.I.begin(), cop.I.end(), ci.id);
            cd ai = it != cop.I.end() ? crit.z[size_t(it - cop.I.begin())]
                                      : cd(alphaJ_of[ci.id], 0.0);
            lin += ai * pf;
        }
        cd g = exp(cd(0.0, 1.0) * lin + kappa_correction(spec, crit.z) +
                   cd(0.0, 2.0 * pi_d * eps_sum / double(r)));

        // det Hess(W / 4 pi i) = det(H) / (4 pi i)^d
        cd denom_pow{1.0, 0.0};
        for (int k = 0; k < d; ++k) denom_pow = denom_pow * cd(0.0, 4.0 * pi_d);
        cd det_scaled = crit.hess_det / denom_pow;
        cd root = sqrt(-det_scaled);

        log_complex<double> term = log_complex<double>::from_cplx(g / root);
        // r^{|I|+c} / (2^{2|I|+c} pi^{|I|+c}) (r/2)^{-c} (2 pi / r)^{d/2}
        double lg = double(d) * std::log(double(r)) -
                    double(2 * nI + c) * std::log(2.0) - double(d) * std::log(pi_d) -
                    double(c) * std::log(double(r) / 2.0) +
                    0.5 * double(d) * std::log(2.0 * pi_d / double(r));
        term.logmag += lg;
        // e^{(r / 4 pi i) W(z)}
        double f = double(r) / (4.0 * pi_d);
        term.logmag += f * crit.value.im;
        term = term * log_complex<double>{0.0, -f * crit.value.re};
        total.add(term);
        out.solves.push_back(std::move(crit));
    }
    auto pred = detail::kappa_r_prefactor(r, pres, cop) * total.value();

    log_complex<double> exact_d{to_double(exact.logmag), to_double(exact.phase)};
    if (sign == 0) {
        cd ratio_plus = (pred / exact_d).to_cplx();
        sign = (to_double(abs(ratio_plus - cd(1.0, 0.0))) <=
                to_double(abs(-ratio_plus - cd(1.0, 0.0)))) ? +1 : -1;
    }
    if (sign < 0) pred = pred * log_complex<double>{0.0, pi_d};
    out.predicted = pred;
    out.exact = exact_d;
    out.ratio = (pred / exact_d).to_cplx();
    out.sqrt_sign = sign;
    return out;
}

// ---------------------------------------------------------------------------
// End-to-end conjecture report.

struct report_options {
    double tol_re_rel = 0.02;   // relative tolerance on the volume
    double tol_im_abs = 0.05 * pi_d * pi_d;  // absolute tolerance on CS mod pi^2
    growth_options growth{};
};

struct conjecture_report {
    growth_table table;
    fit_result fit;
    double vol_ref = 0.0;
    double cs_ref = 0.0;
    double re_error = 0.0;        // |Re a - vol| / vol
    double im_error = 0.0;        // circle distance of Im a to cs mod pi^2
    bool re_pass = false, im_pass = false;
    critical_result reference_solve;
};

template <class R>
conjecture_report run_conjecture_report(const fsl_presentation& pres,
                                        const std::optional<change_of_pair>& cop,
                                        const std::vector<double>& theta,
                                        const std::vector<int>& r_list,
                                        const report_options& opt = {}) {
    conjecture_report rep;
    std::map<int, double> theta_of;
    for (size_t i = 0; i < pres.components.size(); ++i)
        theta_of[pres.components[i].id] = theta[i];
    std::vector<int> I = cop ? cop->I : std::vector<int>{};
    std::map<int, long> q;
    if (cop) q = cop->q;
    auto spec = potential_spec::from_angles(pres, I, q, theta_of);
    rep.reference_solve = solve_critical(spec);
    rep.vol_ref = rep.reference_solve.vol;
    rep.cs_ref = rep.reference_solve.cs;

    rep.table = growth_series<R>(pres, cop, theta, r_list, opt.growth);
    rep.fit = fit_limit(rep.table);
    rep.re_error = std::fabs(rep.fit.limit.re - rep.vol_ref) / std::max(1e-12, std::fabs(rep.vol_ref));
    rep.im_error = std::fabs(reduce_mod_pi2(rep.fit.limit.im - rep.cs_ref));
    rep.re_pass = rep.re_error <= opt.tol_re_rel;
    rep.im_pass = rep.im_error <= opt.tol_im_abs;
    return rep;
}

} // namespace qtopo
