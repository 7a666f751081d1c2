// Complex numbers stored as (log-magnitude, phase).  State-sum invariants grow
// like e^{r Vol / 4 pi}, far past the range of fixed-width floats, so every
// exponentially scaled quantity in the library lives in this form until final
// reporting.
#pragma once

#include <limits>
#include "qtopo/cplx.hpp"

namespace qtopo {

template <class R>
struct log_complex {
    R logmag = R(-std::numeric_limits<double>::infinity());
    R phase = R(0.0);  // in (-pi, pi]

    log_complex() = default;
    log_complex(R lm, R ph) : logmag(lm), phase(wrap(ph)) {}

    static log_complex zero() { return {}; }
    static log_complex one() { return {R(0.0), R(0.0)}; }

    bool is_zero() const { return !(logmag > R(-std::numeric_limits<double>::infinity())); }

    static R wrap(R ph) {
        const R tp = scalar_traits<R>::two_pi();
        const R p = scalar_traits<R>::pi();
        R k = round_nearest(ph / tp);
        ph = ph - k * tp;
        if (ph > p) ph -= tp;
        if (ph <= -p) ph += tp;
        return ph;
    }

    static log_complex from_cplx(cplx<R> z) {
        R n2 = norm2(z);
        if (!(to_double(n2) > 0.0)) return zero();
        return {log(n2) * R(0.5), arg(z)};
    }

    static log_complex from_real(R x) {
        double xd = to_double(x);
        if (xd == 0.0) return zero();
        if (xd < 0.0) return {log(-x), scalar_traits<R>::pi()};
        return {log(x), R(0.0)};
    }

    cplx<R> to_cplx() const {
        if (is_zero()) return {R(0.0), R(0.0)};
        return cis(phase) * exp(logmag);
    }
};

template <class R>
log_complex<R> operator*(log_complex<R> a, log_complex<R> b) {
    if (a.is_zero() || b.is_zero()) return log_complex<R>::zero();
    return {a.logmag + b.logmag, a.phase + b.phase};
}

template <class R>
log_complex<R> operator/(log_complex<R> a, log_complex<R> b) {
    if (a.is_zero()) return log_complex<R>::zero();
    return {a.logmag - b.logmag, a.phase - b.phase};
}

// Addition factors out the larger log-magnitude.
template <class R>
log_complex<R> operator+(log_complex<R> a, log_complex<R> b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.logmag < b.logmag) { auto t = a; a = b; b = t; }
    cplx<R> s = cplx<R>(R(1.0), R(0.0)) + cis(b.phase - a.phase) * exp(b.logmag - a.logmag);
    auto ls = log_complex<R>::from_cplx(s);
    if (ls.is_zero()) return log_complex<R>::zero();
    return {a.logmag + ls.logmag, a.phase + ls.phase};
}

template <class R>
log_complex<R> pow_int(log_complex<R> a, long n) {
    if (n == 0) return log_complex<R>::one();
    if (a.is_zero()) return log_complex<R>::zero();
    return {a.logmag * R(double(n)), a.phase * R(double(n))};
}

template <class R>
log_complex<R> sqrt_principal(log_complex<R> a) {
    if (a.is_zero()) return a;
    return {a.logmag * R(0.5), a.phase * R(0.5)};
}

// Accumulator for sums of log-complex terms: keeps a running pivot magnitude
// and a compensated (Kahan) complex accumulator scaled by e^{-pivot}.
template <class R>
struct log_sum {
    R pivot = R(-std::numeric_limits<double>::infinity());
    cplx<R> acc{R(0.0), R(0.0)};
    cplx<R> comp{R(0.0), R(0.0)};
    long skipped = 0;  // zero/underflow terms

    void rescale(R new_pivot) {
        R f = exp(pivot - new_pivot);
        acc = acc * f;
        comp = comp * f;
        pivot = new_pivot;
    }

    void add(log_complex<R> t) {
        if (t.is_zero()) { ++skipped; return; }
        if (!(pivot > R(-std::numeric_limits<double>::infinity()))) pivot = t.logmag;
        else if (t.logmag > pivot) rescale(t.logmag);
        if (to_double(t.logmag - pivot) < -900.0) return;  // underflows the pivot scale
        cplx<R> v = cis(t.phase) * exp(t.logmag - pivot);
        // Kahan on both components
        cplx<R> y = v - comp;
        cplx<R> s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }

    void merge(const log_sum& o) {
        if (!(o.pivot > R(-std::numeric_limits<double>::infinity()))) { skipped += o.skipped; return; }
        if (!(pivot > R(-std::numeric_limits<double>::infinity()))) { *this = o; return; }
        log_sum a = *this, b = o;
        if (b.pivot > a.pivot) { auto t = a; a = b; b = t; }
        R f = exp(b.pivot - a.pivot);
        a.acc += b.acc * f;
        a.skipped += b.skipped;
        a.comp = cplx<R>(R(0.0), R(0.0));
        *this = a;
    }

    log_complex<R> value() const {
        if (!(pivot > R(-std::numeric_limits<double>::infinity())))
            return log_complex<R>::zero();
        auto l = log_complex<R>::from_cplx(acc);
        if (l.is_zero()) return log_complex<R>::zero();
        return {pivot + l.logmag, l.phase};
    }
};

} // namespace qtopo
