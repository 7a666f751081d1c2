// Root-of-unity context for the SO(3) theory at q = e^{2 pi i / r}, r odd:
// quantum integers and factorials, admissibility predicates, and the discrete
// Fourier kernel H(m, n).
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtopo/log_complex.hpp"
#include "qtopo/special.hpp"

namespace qtopo {

template <class R>
struct signed_log {
    R logmag = R(-std::numeric_limits<double>::infinity());
    int sign = 0;  // -1, 0, +1

    log_complex<R> to_log_complex() const {
        if (sign == 0) return log_complex<R>::zero();
        return {logmag, sign > 0 ? R(0.0) : scalar_traits<R>::pi()};
    }
};

struct bad_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Immutable after construction; safe to share across threads.
template <class R>
class root_context {
public:
    explicit root_context(int r) : r_(r) {
        if (r < 3 || r % 2 == 0)
            throw bad_input("root_context: r must be an odd integer >= 3, got " + std::to_string(r));
        const R pi = scalar_traits<R>::pi();
        two_pi_over_r_ = scalar_traits<R>::two_pi() / R(double(r));
        sin1_ = sin(two_pi_over_r_);
        mu_ = R(2.0) * sin1_ / sqrt(R(double(r)));
        log_mu_ = log(mu_);

        qint_.resize(r);
        qint_[0] = R(0.0);
        for (int n = 1; n < r; ++n)
            qint_[n] = sin(two_pi_over_r_ * R(double(n))) / sin1_;

        // [n]! and {n}! for 0 <= n <= r-1 ({n}! = ({1})^n [n]!, {1} = 2 i sin(2 pi / r))
        fact_.resize(r);
        curly_.resize(r);
        fact_[0] = {R(0.0), +1};
        R log_two_sin = log(R(2.0) * sin1_);
        R acc(0.0);
        int sg = 1;
        curly_[0] = log_complex<R>::one();
        for (int n = 1; n < r; ++n) {
            R v = qint_[n];
            acc += log(fabs(v));
            if (to_double(v) < 0.0) sg = -sg;
            fact_[n] = {acc, sg};
            R ph = pi * R(0.5) * R(double(n)) + (sg > 0 ? R(0.0) : pi);
            curly_[n] = log_complex<R>(acc + R(double(n)) * log_two_sin, ph);
        }
    }

    int r() const { return r_; }
    R mu() const { return mu_; }
    R log_mu() const { return log_mu_; }
    R angle(long n) const { return two_pi_over_r_ * R(double(n)); }  // 2 pi n / r

    // Color set I_r = {0, 2, ..., r-3}.
    std::vector<int> color_set() const {
        std::vector<int> v;
        for (int m = 0; m <= r_ - 3; m += 2) v.push_back(m);
        return v;
    }
    int num_colors() const { return (r_ - 1) / 2; }
    bool is_color(long m) const { return m >= 0 && m <= r_ - 3 && m % 2 == 0; }

    // [n] = sin(2 pi n / r) / sin(2 pi / r); any integer argument (reduced mod r).
    R qint(long n) const {
        long k = n % r_;
        if (k < 0) k += r_;
        return qint_[size_t(k)];
    }

    // [n]! as a signed log value, 0 <= n <= r-1.
    signed_log<R> qfact(long n) const {
        check_fact_range(n);
        return fact_[size_t(n)];
    }

    log_complex<R> qfact_bracket(long n) const { return qfact(n).to_log_complex(); }

    // {n}! = ({1})^n [n]!
    log_complex<R> curly_fact(long n) const {
        check_fact_range(n);
        return curly_[size_t(n)];
    }

    // q^e as a unit log-complex with the exponent reduced mod r.
    log_complex<R> q_power(long e) const {
        long k = e % r_;
        return {R(0.0), two_pi_over_r_ * R(double(k))};
    }

    bool admissible_triple(long m1, long m2, long m3) const {
        return m1 + m2 - m3 >= 0 && m2 + m3 - m1 >= 0 && m3 + m1 - m2 >= 0 &&
               m1 + m2 + m3 <= 2L * (r_ - 2);
    }

    // DFT kernel H(m, n) = (-1)^{m+n} [(m+1)(n+1)]; real for even colors.
    R dft_kernel(long m, long n) const {
        R v = qint((m + 1) * (n + 1));
        return ((m + n) % 2 == 0) ? v : -v;
    }

private:
    void check_fact_range(long n) const {
        if (n < 0 || n > r_ - 1)
            throw bad_input("quantum factorial argument out of range [0, r-1]: n=" +
                            std::to_string(n) + ", r=" + std::to_string(r_));
    }

    int r_;
    R two_pi_over_r_{}, sin1_{}, mu_{}, log_mu_{};
    std::vector<R> qint_;
    std::vector<signed_log<R>> fact_;
    std::vector<log_complex<R>> curly_;
};

// Hyperideal predicates (integer and angle versions).  The four triples are
// {1,2,3}, {1,5,6}, {2,4,6}, {3,4,5} in 1-based labels.
inline constexpr int sixj_triples[4][3] = {{0, 1, 2}, {0, 4, 5}, {1, 3, 5}, {2, 3, 4}};
inline constexpr int sixj_quads[3][4] = {{0, 1, 3, 4}, {0, 2, 3, 5}, {1, 2, 4, 5}};

template <class R>
bool hyperideal_int(const root_context<R>& ctx, const std::array<long, 6>& m) {
    long cap = ctx.r() - 2;
    for (auto& t : sixj_triples) {
        long a = m[t[0]], b = m[t[1]], c = m[t[2]];
        long perm[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
        for (auto& p : perm) {
            long d = p[0] + p[1] - p[2];
            if (d < 0 || d >= cap) return false;
        }
        long s = a + b + c;
        if (s < cap || s > 2 * cap) return false;
    }
    return true;
}

inline bool hyperideal_angles(const std::array<double, 6>& a) {
    const double tp = 2.0 * 3.141592653589793238462643383279502884;
    for (auto& t : sixj_triples) {
        double x = a[t[0]], y = a[t[1]], z = a[t[2]];
        double perm[3][3] = {{x, y, z}, {y, z, x}, {z, x, y}};
        for (auto& p : perm) {
            double d = p[0] + p[1] - p[2];
            if (d < 0.0 || d > tp) return false;
        }
        double s = x + y + z;
        if (s < tp || s > 2.0 * tp) return false;
    }
    return true;
}

} // namespace qtopo
