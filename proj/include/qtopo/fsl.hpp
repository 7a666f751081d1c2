// Relative invariants of shadow-link presentations: the closed-form product
// over blocks, the change-of-pair invariant (surgery on the components in I),
// the partial discrete Fourier transform of tabulated invariants, and the
// Parseval / Turaev-Viro checks.
#pragma once

#include <map>
#include <numeric>

#include "qtopo/parallel.hpp"
#include "qtopo/presentation.hpp"
#include "qtopo/sixj.hpp"

namespace qtopo {

struct grid_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long default_grid_cap = 10'000'000;

namespace detail {

template <class R>
void check_colors(const root_context<R>& ctx, const std::vector<long>& colors) {
    for (long m : colors)
        if (!ctx.is_color(m))
            throw bad_input("color " + std::to_string(m) + " is not an even integer in [0, r-3]");
}

// (-1)^{iota m / 2} q^{(p + iota/2) m (m+2) / 2} as a unit phase.
// m even makes every exponent an integer; that is asserted, never rounded.
template <class R>
log_complex<R> framing_phase(const root_context<R>& ctx, long p, long iota, long m) {
    if (m % 2 != 0)
        throw bad_input("framing phase: odd color would give a non-integral exponent");
    long j = m / 2;
    long qexp = p * (m * (m + 2) / 2) + iota * (j * (j + 1));
    auto ph = ctx.q_power(qexp);
    if ((iota * j) % 2 != 0)
        ph = ph * log_complex<R>{R(0.0), scalar_traits<R>::pi()};
    return ph;
}

} // namespace detail

// RT invariant of the presentation at a full coloring (one color per
// component).  A block with an inadmissible six-tuple makes the value zero.
template <class R>
log_complex<R> rt_fsl(const root_context<R>& ctx, const fsl_presentation& pres,
                      const std::vector<long>& colors) {
    detail::check_colors(ctx, colors);
    auto blocks = expand_coloring(pres, colors);
    for (const auto& b : blocks)
        if (!admissible_six(ctx, b)) return log_complex<R>::zero();
    log_complex<R> v{-ctx.log_mu() * R(double(pres.c)), R(0.0)};  // mu^{-c}
    for (size_t i = 0; i < pres.components.size(); ++i) {
        const auto& ci = pres.components[i];
        v = v * detail::framing_phase(ctx, ci.p, ci.iota, colors[i]);
    }
    for (const auto& b : blocks)
        v = v * sixj_direct(ctx, b);
    return v;
}

namespace detail {

// e^{-sigma (-3/r - (r+1)/4) i pi}; the quarter-integer part is reduced exactly.
template <class R>
log_complex<R> sigma_phase(const root_context<R>& ctx, long sigma) {
    const R pi = scalar_traits<R>::pi();
    long k8 = ((sigma * (ctx.r() + 1)) % 8 + 8) % 8;
    R ph = pi * R(double(k8)) * R(0.25) + pi * R(3.0 * double(sigma)) / R(double(ctx.r()));
    return {R(0.0), ph};
}

struct grid_iter {
    long n_axes;
    long radix;
    std::vector<long> digits;

    explicit grid_iter(long axes, long rad) : n_axes(axes), radix(rad), digits(size_t(axes), 0) {}

    void seek(long index) {
        for (long a = 0; a < n_axes; ++a) {
            digits[size_t(a)] = index % radix;
            index /= radix;
        }
    }
    long color(long axis) const { return 2 * digits[size_t(axis)]; }
    void next() {
        for (long a = 0; a < n_axes; ++a) {
            if (++digits[size_t(a)] < radix) return;
            digits[size_t(a)] = 0;
        }
    }
};

template <class R>
struct sum_partial {
    log_sum<R> sum;
    long skipped = 0;
    void merge(const sum_partial& o) {
        sum.merge(o.sum);
        skipped += o.skipped;
    }
};

} // namespace detail

struct rt_cop_options {
    long grid_cap = default_grid_cap;
    int threads = 0;
};

template <class R>
struct rt_cop_result {
    log_complex<R> value;
    long skipped = 0;  // inadmissible grid points
};

// Change-of-pair invariant: surgery on the components in I, new colors n_I,
// retained colors m_J on the complement.  Inner sum over all colorings of I.
template <class R>
rt_cop_result<R> rt_cop(const root_context<R>& ctx, const fsl_presentation& pres,
                        const change_of_pair& cop, const std::vector<long>& n_I,
                        const std::vector<long>& m_J, const rt_cop_options& opt = {}) {
    if (n_I.size() != cop.I.size())
        throw bad_input("rt_cop: one color per component of I required");
    detail::check_colors(ctx, n_I);
    detail::check_colors(ctx, m_J);

    std::vector<int> J;
    for (const auto& ci : pres.components)
        if (std::find(cop.I.begin(), cop.I.end(), ci.id) == cop.I.end())
            J.push_back(ci.id);
    if (m_J.size() != J.size())
        throw bad_input("rt_cop: one color per component of J required");

    const long nI = long(cop.I.size());
    const long radix = ctx.num_colors();
    double grid_size = std::pow(double(radix), double(nI));
    if (grid_size > double(opt.grid_cap))
        throw grid_cap_error("rt_cop: inner color grid exceeds the cap (use force to override)");
    long n_points = 1;
    for (long i = 0; i < nI; ++i) n_points *= radix;

    // prefactor mu^{|I|-c} sigma-phase prod_I q^{q_i n_i(n_i+2)/2} prod_J phases
    log_complex<R> pref{ctx.log_mu() * R(double(nI - pres.c)), R(0.0)};
    pref = pref * detail::sigma_phase(ctx, cop.sigma);
    for (size_t i = 0; i < cop.I.size(); ++i)
        pref = pref * ctx.q_power(cop.q.at(cop.I[i]) * (n_I[i] * (n_I[i] + 2) / 2));
    std::map<int, long> color_by_id;
    for (size_t j = 0; j < J.size(); ++j) {
        int id = J[size_t(j)];
        const auto& ci = pres.component(id);
        pref = pref * detail::framing_phase(ctx, ci.p, ci.iota, m_J[j]);
        color_by_id[id] = m_J[j];
    }

    auto chunk_fn = [&](long lo, long hi) {
        detail::sum_partial<R> part;
        detail::grid_iter it(nI, radix);
        it.seek(lo);
        std::map<int, long> cmap = color_by_id;
        for (long idx = lo; idx < hi; ++idx, it.next()) {
            for (long i = 0; i < nI; ++i) cmap[cop.I[size_t(i)]] = it.color(i);
            log_complex<R> term = log_complex<R>::one();
            bool ok = true;
            auto blocks = expand_coloring(pres, [&](int id) { return cmap.at(id); });
            for (const auto& b : blocks)
                if (!admissible_six(ctx, b)) { ok = false; break; }
            if (!ok) { ++part.skipped; continue; }
            for (long i = 0; i < nI; ++i) {
                long mi = it.color(i);
                const auto& ci = pres.component(cop.I[size_t(i)]);
                term = term * detail::framing_phase(ctx, ci.p, ci.iota, mi);
                term = term * log_complex<R>::from_real(ctx.qint((mi + 1) * (n_I[size_t(i)] + 1)));
            }
            for (const auto& b : blocks)
                term = term * sixj_direct(ctx, b);
            part.sum.add(term);
        }
        return part;
    };
    auto part = parallel_reduce<detail::sum_partial<R>>(n_points, 1024, chunk_fn, opt.threads);
    return {pref * part.sum.value(), part.skipped};
}

// Dense table of an invariant over the full color grid.
template <class R>
struct tabulated_invariant {
    std::vector<int> axes;  // component ids, slowest axis last
    long radix = 0;         // number of colors per axis
    std::vector<log_complex<R>> values;

    long index(const std::vector<long>& colors) const {
        long idx = 0;
        for (size_t a = colors.size(); a-- > 0;)
            idx = idx * radix + colors[a] / 2;
        return idx;
    }
    const log_complex<R>& at(const std::vector<long>& colors) const { return values[size_t(index(colors))]; }
};

template <class R>
tabulated_invariant<R> tabulate_rt_fsl(const root_context<R>& ctx, const fsl_presentation& pres,
                                       long grid_cap = default_grid_cap, int threads = 0) {
    tabulated_invariant<R> tab;
    for (const auto& ci : pres.components) tab.axes.push_back(ci.id);
    tab.radix = ctx.num_colors();
    long n = long(tab.axes.size());
    double gs = std::pow(double(tab.radix), double(n));
    if (gs > double(grid_cap)) throw grid_cap_error("tabulate: color grid exceeds the cap");
    long n_points = 1;
    for (long i = 0; i < n; ++i) n_points *= tab.radix;
    tab.values.resize(size_t(n_points));
    struct dummy { void merge(const dummy&) {} };
    parallel_reduce<dummy>(n_points, 1024, [&](long lo, long hi) {
        detail::grid_iter it(n, tab.radix);
        it.seek(lo);
        std::vector<long> colors(size_t(n));
        for (long idx = lo; idx < hi; ++idx, it.next()) {
            for (long a = 0; a < n; ++a) colors[size_t(a)] = it.color(a);
            tab.values[size_t(idx)] = rt_fsl(ctx, pres, colors);
        }
        return dummy{};
    }, threads);
    return tab;
}

// Partial discrete Fourier transform: new table over the axes not in I,
//   fhat(n_I)(m_J) = mu^{|I|} sum_{m_I} prod_i H(m_i, n_i) f(m_I, m_J).
template <class R>
tabulated_invariant<R> partial_dft(const root_context<R>& ctx, const tabulated_invariant<R>& f,
                                   const std::vector<int>& I, const std::vector<long>& n_I) {
    if (I.size() != n_I.size()) throw bad_input("partial_dft: one new color per axis of I");
    std::vector<long> ipos, jpos;
    for (size_t a = 0; a < f.axes.size(); ++a) {
        if (std::find(I.begin(), I.end(), f.axes[a]) != I.end())
            ipos.push_back(long(a));
        else
            jpos.push_back(long(a));
    }
    if (ipos.size() != I.size()) throw bad_input("partial_dft: axis mismatch");

    // reorder n_I to table axis order
    std::vector<long> n_by_pos(ipos.size());
    for (size_t k = 0; k < ipos.size(); ++k) {
        int id = f.axes[size_t(ipos[k])];
        size_t src = size_t(std::find(I.begin(), I.end(), id) - I.begin());
        n_by_pos[k] = n_I[src];
    }

    tabulated_invariant<R> out;
    out.radix = f.radix;
    for (long jp : jpos) out.axes.push_back(f.axes[size_t(jp)]);
    long nj = long(jpos.size()), ni = long(ipos.size());
    long out_points = 1;
    for (long a = 0; a < nj; ++a) out_points *= f.radix;
    long in_points = 1;
    for (long a = 0; a < ni; ++a) in_points *= f.radix;
    out.values.resize(size_t(out_points));

    std::vector<long> full(f.axes.size());
    detail::grid_iter jit(nj, f.radix);
    for (long jdx = 0; jdx < out_points; ++jdx, jit.next()) {
        log_sum<R> sum;
        detail::grid_iter iit(ni, f.radix);
        for (long idx = 0; idx < in_points; ++idx, iit.next()) {
            for (long a = 0; a < nj; ++a) full[size_t(jpos[size_t(a)])] = jit.color(a);
            for (long a = 0; a < ni; ++a) full[size_t(ipos[size_t(a)])] = iit.color(a);
            log_complex<R> t = f.values[size_t(f.index(full))];
            for (long a = 0; a < ni; ++a) {
                R h = ctx.dft_kernel(iit.color(a), n_by_pos[size_t(a)]);
                t = t * log_complex<R>::from_real(h);
            }
            sum.add(t);
        }
        auto v = sum.value();
        out.values[size_t(jdx)] = log_complex<R>{v.logmag + ctx.log_mu() * R(double(ni)), v.phase};
    }
    return out;
}

// Full transform on every axis; returns a table over the new colors.
template <class R>
tabulated_invariant<R> full_dft(const root_context<R>& ctx, const tabulated_invariant<R>& f) {
    tabulated_invariant<R> out;
    out.axes = f.axes;
    out.radix = f.radix;
    out.values.resize(f.values.size());
    long n = long(f.axes.size());
    long points = long(f.values.size());
    detail::grid_iter nit(n, f.radix);
    std::vector<long> ncol(size_t(n));
    for (long ndx = 0; ndx < points; ++ndx, nit.next()) {
        for (long a = 0; a < n; ++a) ncol[size_t(a)] = nit.color(a);
        log_sum<R> sum;
        detail::grid_iter mit(n, f.radix);
        for (long mdx = 0; mdx < points; ++mdx, mit.next()) {
            log_complex<R> t = f.values[size_t(mdx)];
            for (long a = 0; a < n; ++a)
                t = t * log_complex<R>::from_real(ctx.dft_kernel(mit.color(a), ncol[size_t(a)]));
            sum.add(t);
        }
        auto v = sum.value();
        out.values[size_t(ndx)] = log_complex<R>{v.logmag + ctx.log_mu() * R(double(n)), v.phase};
    }
    return out;
}

template <class R>
struct poisson_result {
    log_complex<R> lhs;      // sum_m |RT(M, L, m)|^2
    log_complex<R> rhs;      // sum_n |RT(M*, L*, n)|^2
    double rel_err = 0.0;
    long skipped_lhs = 0, skipped_rhs = 0;
};

// Parseval identity between the presentation and its change-of-pair image.
template <class R>
poisson_result<R> poisson_check(const root_context<R>& ctx, const fsl_presentation& pres,
                                const rt_cop_options& opt = {}) {
    if (!pres.cop) throw bad_input("poisson_check: presentation has no cop block");
    const auto& cop = *pres.cop;
    long n = pres.n_components();
    long radix = ctx.num_colors();
    double gs = std::pow(double(radix), double(n));
    if (gs > double(opt.grid_cap)) throw grid_cap_error("poisson_check: color grid exceeds the cap");
    long points = 1;
    for (long a = 0; a < n; ++a) points *= radix;

    auto lhs_fn = [&](long lo, long hi) {
        detail::sum_partial<R> part;
        detail::grid_iter it(n, radix);
        it.seek(lo);
        std::vector<long> colors(size_t(n));
        for (long idx = lo; idx < hi; ++idx, it.next()) {
            for (long a = 0; a < n; ++a) colors[size_t(a)] = it.color(a);
            auto v = rt_fsl(ctx, pres, colors);
            if (v.is_zero()) { ++part.skipped; continue; }
            part.sum.add({v.logmag * R(2.0), R(0.0)});
        }
        return part;
    };
    auto lhs = parallel_reduce<detail::sum_partial<R>>(points, 256, lhs_fn, opt.threads);

    std::vector<int> J;
    for (const auto& ci : pres.components)
        if (std::find(cop.I.begin(), cop.I.end(), ci.id) == cop.I.end()) J.push_back(ci.id);
    long nI = long(cop.I.size()), nJ = long(J.size());
    long outer = 1;
    for (long a = 0; a < nI + nJ; ++a) outer *= radix;

    rt_cop_options inner_opt = opt;
    inner_opt.threads = 1;
    auto rhs_fn = [&](long lo, long hi) {
        detail::sum_partial<R> part;
        detail::grid_iter it(nI + nJ, radix);
        it.seek(lo);
        std::vector<long> nc(size_t(nI)), mc(size_t(nJ));
        for (long idx = lo; idx < hi; ++idx, it.next()) {
            for (long a = 0; a < nI; ++a) nc[size_t(a)] = it.color(a);
            for (long a = 0; a < nJ; ++a) mc[size_t(a)] = it.color(nI + a);
            auto v = rt_cop(ctx, pres, cop, nc, mc, inner_opt);
            part.skipped += v.skipped;
            if (v.value.is_zero()) continue;
            part.sum.add({v.value.logmag * R(2.0), R(0.0)});
        }
        return part;
    };
    auto rhs = parallel_reduce<detail::sum_partial<R>>(outer, 64, rhs_fn, opt.threads);

    poisson_result<R> res;
    res.lhs = lhs.sum.value();
    res.rhs = rhs.sum.value();
    res.skipped_lhs = lhs.skipped;
    res.skipped_rhs = rhs.skipped;
    double la = to_double(res.lhs.logmag), lb = to_double(res.rhs.logmag);
    res.rel_err = std::fabs(std::exp(lb - la) - 1.0);
    return res;
}

// Turaev-Viro value of the complement: 2^{h2_rank} sum_m |RT|^2.
template <class R>
log_complex<R> tv_from_rt(const root_context<R>& ctx, const fsl_presentation& pres, int h2_rank,
                          const rt_cop_options& opt = {}) {
    long n = pres.n_components();
    long radix = ctx.num_colors();
    double gs = std::pow(double(radix), double(n));
    if (gs > double(opt.grid_cap)) throw grid_cap_error("tv_from_rt: color grid exceeds the cap");
    long points = 1;
    for (long a = 0; a < n; ++a) points *= radix;
    auto fn = [&](long lo, long hi) {
        detail::sum_partial<R> part;
        detail::grid_iter it(n, radix);
        it.seek(lo);
        std::vector<long> colors(size_t(n));
        for (long idx = lo; idx < hi; ++idx, it.next()) {
            for (long a = 0; a < n; ++a) colors[size_t(a)] = it.color(a);
            auto v = rt_fsl(ctx, pres, colors);
            if (v.is_zero()) { ++part.skipped; continue; }
            part.sum.add({v.logmag * R(2.0), R(0.0)});
        }
        return part;
    };
    auto part = parallel_reduce<detail::sum_partial<R>>(points, 256, fn, opt.threads);
    auto s = part.sum.value();
    const R ln2 = log(R(2.0));
    return {s.logmag + ln2 * R(double(h2_rank)), s.phase};
}

} // namespace qtopo
