// Quantum 6j-symbols at q = e^{2 pi i / r}: the factorial-sum definition and
// an independent route through the quantum dilogarithm exponential sum, plus
// the (2 pi / r) log |6j| growth diagnostic.
#pragma once

#include <array>

#include "qtopo/qcore.hpp"
#include "qtopo/qdilog.hpp"

namespace qtopo {

using six_colors = std::array<long, 6>;

template <class R>
bool admissible_six(const root_context<R>& ctx, const six_colors& m) {
    for (auto& t : sixj_triples)
        if (!ctx.admissible_triple(m[t[0]], m[t[1]], m[t[2]])) return false;
    return true;
}

// Triple half-sums T_1..T_4 and quadruple half-sums Q_1..Q_3.
inline std::array<long, 4> triple_halves(const six_colors& m) {
    std::array<long, 4> t;
    for (int i = 0; i < 4; ++i)
        t[size_t(i)] = (m[size_t(sixj_triples[i][0])] + m[size_t(sixj_triples[i][1])] +
                        m[size_t(sixj_triples[i][2])]) / 2;
    return t;
}
inline std::array<long, 3> quad_halves(const six_colors& m) {
    std::array<long, 3> q;
    for (int j = 0; j < 3; ++j)
        q[size_t(j)] = (m[size_t(sixj_quads[j][0])] + m[size_t(sixj_quads[j][1])] +
                        m[size_t(sixj_quads[j][2])] + m[size_t(sixj_quads[j][3])]) / 2;
    return q;
}

// Delta(m1,m2,m3): square root of a factorial ratio, real or purely imaginary
// (sqrt(x) = i sqrt(|x|) for negative x).
template <class R>
log_complex<R> delta_triple(const root_context<R>& ctx, long m1, long m2, long m3) {
    if (!ctx.admissible_triple(m1, m2, m3))
        throw bad_input("delta_triple: inadmissible triple");
    auto a = ctx.qfact((m1 + m2 - m3) / 2);
    auto b = ctx.qfact((m2 + m3 - m1) / 2);
    auto c = ctx.qfact((m3 + m1 - m2) / 2);
    auto d = ctx.qfact((m1 + m2 + m3) / 2 + 1);
    R lm = (a.logmag + b.logmag + c.logmag - d.logmag) * R(0.5);
    int sq = a.sign * b.sign * c.sign * d.sign;
    R ph = sq > 0 ? R(0.0) : scalar_traits<R>::pi() * R(0.5);
    return {lm, ph};
}

// Direct evaluation from the factorial sum; the k-sum is compensated after
// factoring out the largest term.  Upper limit always min(Q, r-2).
template <class R>
log_complex<R> sixj_direct(const root_context<R>& ctx, const six_colors& m) {
    if (!admissible_six(ctx, m))
        throw bad_input("sixj_direct: tuple not r-admissible");
    auto T = triple_halves(m);
    auto Q = quad_halves(m);
    long lo = std::max(std::max(T[0], T[1]), std::max(T[2], T[3]));
    long hi = std::min(std::min(Q[0], Q[1]), std::min(Q[2], long(ctx.r() - 2)));
    if (hi < lo) return log_complex<R>::zero();

    // prefactor i^{-sum m} Delta^4
    long msum = 0;
    for (long v : m) msum += v;
    log_complex<R> pre = pow_int(log_complex<R>{R(0.0), scalar_traits<R>::pi() * R(0.5)},
                                 ((-msum) % 4 + 4) % 4);
    for (auto& t : sixj_triples)
        pre = pre * delta_triple(ctx, m[size_t(t[0])], m[size_t(t[1])], m[size_t(t[2])]);

    // signed k-sum
    R mx(-std::numeric_limits<double>::infinity());
    std::vector<std::pair<R, int>> terms;
    terms.reserve(size_t(hi - lo + 1));
    for (long k = lo; k <= hi; ++k) {
        auto num = ctx.qfact(k + 1);
        R lm = num.logmag;
        int sg = num.sign * ((k % 2 == 0) ? 1 : -1);
        for (long t : T) {
            auto f = ctx.qfact(k - t);
            lm -= f.logmag;
            sg *= f.sign;
        }
        for (long q : Q) {
            auto f = ctx.qfact(q - k);
            lm -= f.logmag;
            sg *= f.sign;
        }
        terms.emplace_back(lm, sg);
        if (lm > mx) mx = lm;
    }
    R acc(0.0), comp(0.0);
    for (auto& [lm, sg] : terms) {
        R v = exp(lm - mx);
        if (sg < 0) v = -v;
        R y = v - comp;
        R s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    double ad = to_double(acc);
    if (ad == 0.0) return log_complex<R>::zero();
    log_complex<R> ksum{mx + log(fabs(acc)), ad > 0.0 ? R(0.0) : scalar_traits<R>::pi()};
    return pre * ksum;
}

// U_r(alpha_1..alpha_6, xi) built from phi_r lattice values; hyperideal
// integer tuples only.  tau/eta/xi are the angles 2 pi T / r etc.
template <class R>
class sixj_phi_evaluator {
public:
    sixj_phi_evaluator(const root_context<R>& ctx, const phi_options& opt = {})
        : ctx_(ctx), lat_(ctx.r(), opt) {}

    log_complex<R> operator()(const six_colors& m) const {
        const auto& ctx = ctx_;
        const int r = ctx.r();
        if (!hyperideal_int(ctx, m))
            throw bad_input("sixj_via_phir: tuple not of hyperideal type");
        auto T = triple_halves(m);
        auto Q = quad_halves(m);
        long lo = std::max(std::max(T[0], T[1]), std::max(T[2], T[3]));
        long hi = std::min(std::min(Q[0], Q[1]), std::min(Q[2], long(r - 2)));
        if (hi < lo)
            throw bad_input("sixj_via_phir: empty summation range");

        using C = cplx<R>;
        const R pi = scalar_traits<R>::pi();
        const R rr(double(r));

        // k-independent part of U_r
        C base{R(0.0), R(0.0)};
        R quad0 = pi * pi - (pi * R(2.0) / rr) * (pi * R(2.0) / rr);
        for (auto ti : T)
            for (auto qj : Q) {
                R d = ctx.angle(qj - ti);
                quad0 += d * d * R(0.5);
                base -= lat_.at_half(qj - ti) * R(0.5);
            }
        for (auto ti : T) {
            R d = ctx.angle(ti) + pi * R(2.0) / rr - pi;
            quad0 -= d * d * R(0.5);
            base += lat_.at_whole(ti - (r - 3) / 2) * R(0.5);   // tau - pi + 3 pi / r
        }
        base += C(quad0, R(0.0)) - phi_pi_over_r() * R(2.0);

        // sum over k
        log_sum<R> sum;
        for (long k = lo; k <= hi; ++k) {
            C u = base;
            R xi_term = ctx.angle(k) + pi * R(2.0) / rr - pi;
            u += C(xi_term * xi_term, R(0.0));
            u -= lat_.at_whole(k - (r - 3) / 2);                // xi - pi + 3 pi / r
            for (auto ti : T) {
                R d = ctx.angle(k - ti);
                u -= C(d * d, R(0.0));
                u += lat_.at_half(k - ti);
            }
            for (auto qj : Q) {
                R d = ctx.angle(qj - k);
                u -= C(d * d, R(0.0));
                u += lat_.at_half(qj - k);
            }
            // term = e^{(r / 4 pi i) u}:  log-magnitude (r/4pi) Im u, phase -(r/4pi) Re u...
            // 1/i = -i: (r/4pi i) u = -(i r / 4 pi) u = (r/4pi)(Im u) - i (r/4pi)(Re u).
            R f = rr / (R(4.0) * pi);
            sum.add(log_complex<R>{f * u.im, -(f * u.re)});
        }
        // prefactor {1}/2 = i sin(2 pi / r)
        log_complex<R> pref{log(sin(ctx.angle(1))), pi * R(0.5)};
        return pref * sum.value();
    }

private:
    cplx<R> phi_pi_over_r() const { return lat_.at_half(0); }

    const root_context<R>& ctx_;
    phi_lattice<R> lat_;
};

template <class R>
log_complex<R> sixj_via_phir(const root_context<R>& ctx, const six_colors& m,
                             const phi_options& opt = {}) {
    sixj_phi_evaluator<R> ev(ctx, opt);
    return ev(m);
}

// (2 pi / r) log |6j|; -inf reported for a vanishing symbol.
template <class R>
double costantino_ratio(const root_context<R>& ctx, const six_colors& m) {
    auto v = sixj_direct(ctx, m);
    if (v.is_zero()) return -std::numeric_limits<double>::infinity();
    return 2.0 * 3.141592653589793238462643383279502884 / ctx.r() * to_double(v.logmag);
}

// The 24 tetrahedral symmetries: S3 on the three columns times the
// upper-lower pair swaps on two columns at a time.
inline std::array<six_colors, 24> sixj_symmetries(const six_colors& m) {
    std::array<six_colors, 24> out;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    int idx = 0;
    for (auto& p : perms) {
        six_colors c{m[size_t(p[0])], m[size_t(p[1])], m[size_t(p[2])],
                     m[size_t(p[0]) + 3], m[size_t(p[1]) + 3], m[size_t(p[2]) + 3]};
        for (int swaps = 0; swaps < 4; ++swaps) {
            six_colors s = c;
            // swap upper/lower in two of the three columns
            if (swaps == 1) { std::swap(s[0], s[3]); std::swap(s[1], s[4]); }
            if (swaps == 2) { std::swap(s[0], s[3]); std::swap(s[2], s[5]); }
            if (swaps == 3) { std::swap(s[1], s[4]); std::swap(s[2], s[5]); }
            out[size_t(idx++)] = s;
        }
    }
    return out;
}

} // namespace qtopo
