// Acceptance suite: every check the library is contractually required to
// pass, each with its pinned tolerance, runnable from the CLI (`selftest`)
// and from the test harness.  One result line per criterion.
#pragma once

#include <random>
#include <sstream>

#include "qtopo/asympt.hpp"

namespace qtopo {

struct criterion_result {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace selftest {

inline std::vector<int> odd_range(int lo, int hi, int step = 2) {
    std::vector<int> v;
    for (int r = lo; r <= hi; r += step)
        if (r % 2 == 1) v.push_back(r);
    return v;
}

// 1. Kernel unitarity: mu_r^2 sum_m H(m,n) H(m,n') = delta_{n,n'}.
inline criterion_result c1_kernel_unitarity() {
    criterion_result res{1, "kernel unitarity (odd r <= 101, tol 1e-10)"};
    double worst = 0.0;
    int worst_r = 0;
    for (int r = 3; r <= 101; r += 2) {
        root_context<double> ctx(r);
        auto colors = ctx.color_set();
        double mu2 = to_double(ctx.mu()) * to_double(ctx.mu());
        for (long n : colors)
            for (long np : colors) {
                double s = 0.0;
                for (long m : colors) s += ctx.dft_kernel(m, n) * ctx.dft_kernel(m, np);
                double d = std::fabs(mu2 * s - (n == np ? 1.0 : 0.0));
                if (d > worst) { worst = d; worst_r = r; }
            }
    }
    res.pass = worst <= 1e-10;
    std::ostringstream os;
    os << "max deviation " << worst << " (r=" << worst_r << ")";
    res.detail = os.str();
    return res;
}

// 2. Parseval between the test presentation and its change-of-pair image.
inline criterion_result c2_parseval() {
    criterion_result res{2, "Parseval / Poisson identity (r in {5..31}, tol 1e-9)"};
    auto pres = test_presentation();
    double worst = 0.0;
    int worst_r = 0;
    for (int r = 5; r <= 31; r += 2) {
        root_context<double> ctx(r);
        auto pr = poisson_check(ctx, pres);
        if (pr.rel_err > worst) { worst = pr.rel_err; worst_r = r; }
    }
    res.pass = worst <= 1e-9;
    std::ostringstream os;
    os << "max relative error " << worst << " (r=" << worst_r << ")";
    res.detail = os.str();
    return res;
}

inline six_colors random_hyperideal_tuple(const root_context<double>& ctx, std::mt19937_64& rng) {
    auto colors = ctx.color_set();
    std::uniform_int_distribution<size_t> pick(0, colors.size() - 1);
    for (int tries = 0; tries < 200000; ++tries) {
        six_colors m;
        for (auto& v : m) v = colors[pick(rng)];
        if (hyperideal_int(ctx, m)) return m;
    }
    throw bad_input("no hyperideal tuple found");
}

inline six_colors random_admissible_tuple(const root_context<double>& ctx, std::mt19937_64& rng) {
    auto colors = ctx.color_set();
    std::uniform_int_distribution<size_t> pick(0, colors.size() - 1);
    for (int tries = 0; tries < 200000; ++tries) {
        six_colors m;
        for (auto& v : m) v = colors[pick(rng)];
        if (admissible_six(ctx, m)) return m;
    }
    throw bad_input("no admissible tuple found");
}

// 3. Two evaluation routes for the 6j-symbol agree.
inline criterion_result c3_two_path() {
    criterion_result res{3, "6j two-path equivalence (100 random hyperideal tuples per r in {7..51}, tol 1e-6)"};
    std::mt19937_64 rng(20240811);
    double worst = 0.0;
    int worst_r = 0;
    for (int r = 7; r <= 51; r += 2) {
        root_context<double> ctx(r);
        sixj_phi_evaluator<double> ev(ctx);
        for (int t = 0; t < 100; ++t) {
            auto m = random_hyperideal_tuple(ctx, rng);
            auto a = sixj_direct(ctx, m);
            auto b = ev(m);
            double rel;
            if (a.is_zero() && b.is_zero()) rel = 0.0;
            else if (a.is_zero() || b.is_zero()) rel = 1.0;
            else rel = to_double(abs(b.to_cplx() / a.to_cplx() - cplx<double>(1.0, 0.0)));
            if (rel > worst) { worst = rel; worst_r = r; }
        }
    }
    res.pass = worst <= 1e-6;
    std::ostringstream os;
    os << "max relative error " << worst << " (r=" << worst_r << ")";
    res.detail = os.str();
    return res;
}

// 4. Tetrahedral symmetry of the 6j-symbol.
inline criterion_result c4_symmetry() {
    criterion_result res{4, "6j tetrahedral symmetry (24 images, 100 tuples per r <= 51, tol 1e-12)"};
    std::mt19937_64 rng(777);
    double worst = 0.0;
    for (int r = 5; r <= 51; r += 2) {
        root_context<double> ctx(r);
        for (int t = 0; t < 100; ++t) {
            auto m = random_admissible_tuple(ctx, rng);
            auto ref = sixj_direct(ctx, m);
            for (const auto& im : sixj_symmetries(m)) {
                auto v = sixj_direct(ctx, im);
                double rel;
                if (ref.is_zero() && v.is_zero()) rel = 0.0;
                else if (ref.is_zero() || v.is_zero()) rel = 1.0;
                else rel = to_double(abs(v.to_cplx() / ref.to_cplx() - cplx<double>(1.0, 0.0)));
                worst = std::max(worst, rel);
            }
        }
    }
    res.pass = worst <= 1e-12;
    std::ostringstream os;
    os << "max relative error " << worst;
    res.detail = os.str();
    return res;
}

// 5. Quantum dilogarithm functional equations and factorial identities.
inline criterion_result c5_dilog_identities() {
    criterion_result res{5, "phi_r functional equations + factorial identities (odd r <= 101, tol 1e-8)"};
    double worst_fund = 0.0, worst_f2 = 0.0, worst_fact = 0.0;
    for (int r = 5; r <= 101; r += 2) {
        root_context<double> ctx(r);
        // (fund): 1 - e^{2iz} = e^{(r/4 pi i)(phi(z - pi/r) - phi(z + pi/r))}, 0 < Re z < pi
        for (int k = 0; k < 50; ++k) {
            double z = 0.04 + (pi_d - 0.08) * (k + 0.5) / 50.0;
            cd lhs = cd(1.0, 0.0) - exp(cd(0.0, 2.0 * z));
            cd dphi = phi_r<double>(r, cd(z - pi_d / r, 0.0)) - phi_r<double>(r, cd(z + pi_d / r, 0.0));
            cd rhs = exp(cd(0.0, -double(r) / (4.0 * pi_d)) * dphi);
            worst_fund = std::max(worst_fund, to_double(abs(lhs - rhs)));
        }
        // (f2): 1 + e^{r i z} = e^{(r/4 pi i)(phi(z) - phi(z + pi))}, |Re z| < pi/r
        for (int k = 0; k < 50; ++k) {
            double z = -0.8 * pi_d / r + 1.6 * pi_d / r * (k + 0.5) / 50.0;
            cd lhs = cd(1.0, 0.0) + exp(cd(0.0, double(r) * z));
            cd dphi = phi_r<double>(r, cd(z, 0.0)) - phi_r<double>(r, cd(z + pi_d, 0.0));
            cd rhs = exp(cd(0.0, -double(r) / (4.0 * pi_d)) * dphi);
            worst_f2 = std::max(worst_f2, to_double(abs(lhs - rhs)));
        }
        // factorial identities, both branches
        for (int n = 0; n <= r - 2; ++n) {
            auto [b1, b2] = qpochhammer_check(ctx, n);
            worst_fact = std::max(worst_fact, b1);
            if (b2 >= 0.0) worst_fact = std::max(worst_fact, b2);
        }
    }
    double worst = std::max({worst_fund, worst_f2, worst_fact});
    res.pass = worst <= 1e-8;
    std::ostringstream os;
    os << "residuals: fund " << worst_fund << ", f2 " << worst_f2 << ", factorial " << worst_fact;
    res.detail = os.str();
    return res;
}

// 6. log|{n}!| = -(r / 2 pi) Lambda(2 pi n / r) + O(log r) with constant <= 2.
inline criterion_result c6_factorial_growth() {
    criterion_result res{6, "factorial growth bound (odd r <= 1001, fitted C <= 2)"};
    double worstC = 0.0;
    int worst_r = 0, worst_n = 0;
    for (int r = 3; r <= 1001; r += 2) {
        double acc = 0.0;
        double lr = std::log(double(r));
        for (int n = 1; n <= r - 2; ++n) {
            acc += std::log(std::fabs(2.0 * std::sin(2.0 * pi_d * n / r)));
            double resid = std::fabs(acc + (double(r) / (2.0 * pi_d)) * lobachevsky(2.0 * pi_d * n / r));
            double c = resid / lr;
            if (c > worstC) { worstC = c; worst_r = r; worst_n = n; }
        }
    }
    res.pass = worstC <= 2.0;
    std::ostringstream os;
    os << "fitted C = " << worstC << " (r=" << worst_r << ", n=" << worst_n << ")";
    res.detail = os.str();
    return res;
}

// 7. Geometry fixed points and the Hessian probe.
inline criterion_result c7_geometry_fixed_points() {
    criterion_result res{7, "geometry fixed points + Hessian probe"};
    std::ostringstream os;
    bool ok = true;

    std::array<double, 6> sym;
    sym.fill(pi_d);
    double xi = xi_of_alpha_real(sym);
    double exi = std::fabs(xi - 7.0 * pi_d / 4.0);
    ok &= exi <= 1e-10;
    os << "xi(pi,..,pi) err " << exi;

    double v = V_potential(sym, 7.0 * pi_d / 4.0);
    double ev = std::fabs(v - octahedron_volume());
    ok &= ev <= 1e-10;
    os << "; V(sym) err " << ev;

    auto probe = hessian_probe();
    // Quoted proof values: alpha^2 -> -2, alpha_i alpha_j -> -1,
    // alpha xi -> 2, xi^2 -> -8.  The first two hold for the Hessian of
    // Im W (= 2V); the last two hold only for the Hessian of V itself --
    // no single normalization satisfies all four (see decisions ledger).
    double e_d = std::fabs(probe.im_w[0][0] - (-2.0));
    double e_o = std::fabs(probe.im_w[0][1] - (-1.0));
    double e_x = std::fabs(probe.im_w[0][6] - 2.0);
    double e_xx = std::fabs(probe.im_w[6][6] - (-8.0));
    bool probe_ok = e_d <= 1e-5 && e_o <= 1e-5 && e_x <= 1e-5 && e_xx <= 1e-5;
    ok &= probe_ok;
    os << "; probe ImW entries (" << probe.im_w[0][0] << ", " << probe.im_w[0][1] << ", "
       << probe.im_w[0][6] << ", " << probe.im_w[6][6] << ") vs quoted (-2, -1, 2, -8)";
    if (!probe_ok)
        os << " [mixed/xi^2 quoted values are met by the V-normalization instead: "
           << probe.v[0][6] << ", " << probe.v[6][6] << "]";
    res.pass = ok;
    res.detail = os.str();
    return res;
}

// 8. Critical solves: value at zero angles, CS shift from iota, Dehn residual.
inline criterion_result c8_critical_solve() {
    criterion_result res{8, "critical solves (zero-angle value, iota CS shift, Dehn residual)"};
    std::ostringstream os;
    bool ok = true;
    auto pres = test_presentation();

    {
        auto spec = potential_spec::from_angles(pres, {}, {}, {});
        auto crit = solve_critical(spec);
        double v8 = octahedron_volume();
        double e1 = std::fabs(crit.value.re - 2.0 * pi_d * pi_d) + std::fabs(crit.value.im - 2.0 * v8);
        ok &= e1 <= 1e-8;
        os << "zero-angle value err " << e1;
        double ecs = std::fabs(crit.cs);
        ok &= ecs <= 1e-8;
        os << "; cs err " << ecs;
    }
    {
        auto pres2 = pres;
        pres2.components[0].iota = 1;
        auto spec = potential_spec::from_angles(pres2, {}, {}, {});
        auto crit = solve_critical(spec);
        double ecs = std::fabs(reduce_mod_pi2(crit.cs - pi_d * pi_d / 2.0));
        ok &= ecs <= 1e-8;
        os << "; iota=1 cs-pi^2/2 err " << ecs;
    }
    {
        std::map<int, double> theta{{1, 0.1}, {2, 0.1}, {3, 0.1}};
        auto spec = potential_spec::from_angles(pres, {1}, {{1, 0}}, theta);
        auto crit = solve_critical(spec);
        double worst = 0.0;
        for (auto& [id, d] : crit.dehn_residual) worst = std::max(worst, d);
        ok &= worst <= 1e-8;
        os << "; dehn residual " << worst;
    }
    res.pass = ok;
    res.detail = os.str();
    return res;
}

// 9. Growth of the 6j-symbol towards the octahedron volume.
inline criterion_result c9_costantino_growth() {
    criterion_result res{9, "6j growth limit vs octahedron volume (tol 0.02)"};
    growth_table tab;
    for (int r = 101; r <= 1001; r += 100) {
        root_context<double> ctx(r);
        long m = color_for_angle(r, 0.0);
        six_colors six{m, m, m, m, m, m};
        growth_row row;
        row.r = r;
        row.value = cd(costantino_ratio(ctx, six), 0.0);
        tab.rows.push_back(row);
    }
    auto fit = fit_limit(tab);
    double v8 = octahedron_volume();
    double err = std::fabs(fit.limit.re - v8);
    res.pass = err <= 0.02;
    std::ostringstream os;
    os << "fitted limit " << fit.limit.re << ", v8 " << v8 << ", err " << err;
    res.detail = os.str();
    return res;
}

// 10. Volume conjecture for the plain test presentation at angle zero.
inline criterion_result c10_fsl_conjecture() {
    criterion_result res{10, "volume conjecture, plain presentation (Re tol 0.05, Im tol 0.05 mod pi^2)"};
    auto pres = test_presentation();
    std::vector<int> rs;
    for (int r = 101; r <= 1001; r += 100) rs.push_back(r);
    auto tab = growth_series<double>(pres, std::nullopt, {0.0, 0.0, 0.0}, rs);
    auto fit = fit_limit(tab);
    double target = 2.0 * octahedron_volume();
    double re_err = std::fabs(fit.limit.re - target);
    double im_err = std::fabs(reduce_mod_pi2(fit.limit.im));
    res.pass = re_err <= 0.05 && im_err <= 0.05;
    std::ostringstream os;
    os << "Re limit " << fit.limit.re << " vs " << target << " (err " << re_err
       << "); Im mod pi^2 " << im_err;
    res.detail = os.str();
    return res;
}

// 11. Volume conjecture after the change-of-pair operation, theta = 0.1.
inline criterion_result c11_cop_conjecture() {
    criterion_result res{11, "volume conjecture, change-of-pair (theta 0.1, Re 2%, Im 0.05 pi^2)"};
    auto pres = test_presentation();
    std::vector<int> rs;
    for (int r = 101; r <= 2001; r += 100) rs.push_back(r);
    auto rep = run_conjecture_report<double>(pres, pres.cop, {0.1, 0.1, 0.1}, rs);
    res.pass = rep.re_pass && rep.im_pass;
    std::ostringstream os;
    os << "Re limit " << rep.fit.limit.re << " vs Vol " << rep.vol_ref << " (rel err "
       << rep.re_error << "); Im err mod pi^2 " << rep.im_error << " vs CS " << rep.cs_ref;
    res.detail = os.str();
    return res;
}

// 12. Saddle module: Gaussian value, Stirling O(1/r), prediction/exact halving.
inline criterion_result c12_saddle() {
    criterion_result res{12, "saddle estimates (Gaussian 1e-10, Stirling + prediction halving in [0.3, 0.7])"};
    std::ostringstream os;
    bool ok = true;

    auto gauss_grad = [](const std::vector<cd>& z) { return std::vector<cd>{z[0] * -2.0}; };
    double worst_g = 0.0;
    for (double r : {50.0, 100.0, 400.0}) {
        saddle_problem prob;
        prob.dimension = 1;
        prob.f = [](const std::vector<cd>& z) { return -z[0] * z[0]; };
        prob.grad = gauss_grad;
        prob.r = r;
        prob.critical_point = {cd(0.0, 0.0)};
        auto est = saddle_estimate(prob);
        double val = est.to_cplx().re;
        worst_g = std::max(worst_g, std::fabs(val - std::sqrt(pi_d / r)));
    }
    ok &= worst_g <= 1e-10;
    os << "gaussian err " << worst_g;

    auto stirling_err = [](double r) {
        saddle_problem prob;
        prob.dimension = 1;
        prob.f = [](const std::vector<cd>& z) { return log(z[0]) - z[0]; };
        prob.grad = [](const std::vector<cd>& z) {
            return std::vector<cd>{cd(1.0, 0.0) / z[0] - cd(1.0, 0.0)};
        };
        prob.r = r;
        prob.critical_point = {cd(1.0, 0.0)};
        auto est = saddle_estimate(prob);
        double log_exact = std::lgamma(r + 1.0) - (r + 1.0) * std::log(r);
        return std::fabs(std::exp(to_double(est.logmag) - log_exact) - 1.0);
    };
    double e20 = stirling_err(20), e40 = stirling_err(40), e80 = stirling_err(80);
    double h1 = e40 / e20, h2 = e80 / e40;
    ok &= h1 >= 0.3 && h1 <= 0.7 && h2 >= 0.3 && h2 <= 0.7;
    os << "; stirling halving " << h1 << ", " << h2;

    auto pres = test_presentation();
    int sign = 0;
    auto p1 = leading_prediction(pres, *pres.cop, {0.0, 0.0, 0.0}, 501, sign);
    auto p2 = leading_prediction(pres, *pres.cop, {0.0, 0.0, 0.0}, 1001, sign);
    double err1 = to_double(abs(p1.ratio - cd(1.0, 0.0)));
    double err2 = to_double(abs(p2.ratio - cd(1.0, 0.0)));
    double h3 = err2 / err1;
    ok &= h3 >= 0.3 && h3 <= 0.7;
    os << "; prediction err " << err1 << " @501 -> " << err2 << " @1001 (ratio " << h3 << ")";

    res.pass = ok;
    res.detail = os.str();
    return res;
}

inline std::vector<criterion_result> run_all() {
    return {c1_kernel_unitarity(), c2_parseval(),        c3_two_path(),
            c4_symmetry(),         c5_dilog_identities(), c6_factorial_growth(),
            c7_geometry_fixed_points(), c8_critical_solve(), c9_costantino_growth(),
            c10_fsl_conjecture(),  c11_cop_conjecture(),  c12_saddle()};
}

} // namespace selftest
} // namespace qtopo
