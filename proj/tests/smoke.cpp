#include <cstdio>

#include "qtopo/selftest.hpp"

int main() {
    using namespace qtopo;
    root_context<double> ctx(7);
    std::printf("[2]_{r=5} = %.12f\n", to_double(root_context<double>(5).qint(2)));
    auto v = sixj_direct(ctx, six_colors{2, 2, 2, 2, 2, 2});
    std::printf("6j r=7 (2,..) = %.12f phase %.3f\n", std::exp(to_double(v.logmag)),
                to_double(v.phase));
    root_context<dd> ctxd(7);
    auto vd = sixj_direct(ctxd, six_colors{2, 2, 2, 2, 2, 2});
    std::printf("6j dd = %.25f\n", std::exp(to_double(vd.logmag)));
    std::printf("Lambda(pi/4) = %.15f\n", lobachevsky(pi_d / 4));
    std::printf("v8 = %.15f\n", octahedron_volume());
    auto phi = phi_r<double>(101, cd(pi_d / 101, 0.0));
    std::printf("phi_101(pi/101) = %.12f + %.12f i\n", phi.re, phi.im);
    std::array<double, 6> sym;
    sym.fill(pi_d);
    std::printf("xi(sym) = %.12f (7pi/4 = %.12f)\n", xi_of_alpha_real(sym), 7 * pi_d / 4);
    std::printf("V(sym) = %.15f\n", V_potential(sym, 7 * pi_d / 4));
    return 0;
}
