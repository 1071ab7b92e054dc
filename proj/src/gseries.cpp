#include "cotlab/gseries.hpp"

#include "cotlab/dyadic.hpp"
#include "cotlab/errors.hpp"
#include "cotlab/summation.hpp"

#include <cmath>
#include <string>

namespace cotlab {

namespace {

constexpr double pi_const = 3.14159265358979323846;
constexpr std::uint64_t direct_cap_limit = 100000000ULL;

// one pass lo < l <= hi with an optional running snapshot at l = snap_at;
// continuing the same compensated accumulator reproduces the longer prefix
// sum bitwise, so (N, 2N) pairs cost one pass
double direct_sum(double alpha, std::uint64_t lo, std::uint64_t hi,
                  std::uint64_t snap_at, double* snap) {
    dyadic_frac d = to_dyadic(alpha);
    dyadic_sawtooth B(d);
    neumaier_sum acc;
    for (std::uint64_t l = lo + 1; l <= hi; ++l) {
        acc.add(B(l) / static_cast<double>(l));
        if (snap && l == snap_at) *snap = acc.value();
    }
    return acc.value();
}

// truncated Fourier sum via a rotating phasor for (cos, sin)(2 pi m alpha),
// resynchronized from the exact dyadic residue every 512 steps so rounding
// drift never accumulates past a few ulp
double fourier_sum(double alpha, std::uint64_t M, const divisor_table& t,
                   bool fejer, std::uint64_t snap_at, double* snap) {
    double a = alpha - std::floor(alpha);
    dyadic_frac d = to_dyadic(a);
    const bool fast = d.fast;
    const std::uint64_t num = d.num;
    const std::uint64_t mask =
        fast ? ((d.e == 63) ? 0x7FFFFFFFFFFFFFFFULL : ((1ULL << d.e) - 1)) : 0;
    const double inv = fast ? std::ldexp(1.0, -d.e) : 0.0;
    const double c1 = cos_two_pi_frac(a);
    const double s1 = sin_two_pi_frac(a);
    double cm = 1.0, sm = 0.0;
    const double coeff = 2.0 / pi_const;
    const double wden = static_cast<double>(M) + 1.0;
    neumaier_sum acc;
    for (std::uint64_t m = 1; m <= M; ++m) {
        double nc = cm * c1 - sm * s1;
        double ns = sm * c1 + cm * s1;
        cm = nc;
        sm = ns;
        if ((m & 511ULL) == 0ULL) {
            double fm;
            if (fast) {
                std::uint64_t r = (m * num) & mask;
                fm = static_cast<double>(r) * inv;
            } else {
                double u = static_cast<double>(m) * a;
                fm = u - std::floor(u);
            }
            cm = cos_two_pi_frac(fm);
            sm = sin_two_pi_frac(fm);
        }
        double w = fejer ? (1.0 - static_cast<double>(m) / wden) : 1.0;
        acc.add(coeff * w * static_cast<double>(t.tau[m]) * sm /
                static_cast<double>(m));
        if (snap && m == snap_at) *snap = acc.value();
    }
    return acc.value();
}

} // namespace

double g_direct_slice(double alpha, std::uint64_t lo, std::uint64_t hi) {
    if (hi > direct_cap_limit)
        throw domain_error("g_direct_slice: cap " + std::to_string(hi) +
                           " exceeds the direct-series feasibility bound 1e8");
    if (hi <= lo) return 0.0;
    return direct_sum(alpha, lo, hi, 0, nullptr);
}

double g_direct(double alpha, std::uint64_t N) { return g_direct_slice(alpha, 0, N); }

g_pair g_direct_pair(double alpha, std::uint64_t N) {
    if (2 * N > direct_cap_limit)
        throw domain_error("g_direct_pair: cap " + std::to_string(2 * N) +
                           " exceeds the direct-series feasibility bound 1e8");
    g_pair p{0.0, 0.0};
    if (N == 0) return p;
    p.hi = direct_sum(alpha, 0, 2 * N, N, &p.lo);
    return p;
}

double g_fourier(double alpha, std::uint64_t M, const divisor_table& t, bool fejer) {
    if (M > t.limit)
        throw domain_error("g_fourier: cap M=" + std::to_string(M) +
                           " exceeds divisor table limit " + std::to_string(t.limit));
    if (M == 0) return 0.0;
    return fourier_sum(alpha, M, t, fejer, 0, nullptr);
}

g_pair g_fourier_pair(double alpha, std::uint64_t M, const divisor_table& t,
                      bool fejer) {
    if (2 * M > t.limit)
        throw domain_error("g_fourier_pair: cap 2M=" + std::to_string(2 * M) +
                           " exceeds divisor table limit " + std::to_string(t.limit));
    g_pair p{0.0, 0.0};
    if (M == 0) return p;
    if (!fejer) {
        p.hi = fourier_sum(alpha, 2 * M, t, false, M, &p.lo);
    } else {
        // Fejer weights depend on the cap, so the two estimates need their
        // own passes
        p.lo = fourier_sum(alpha, M, t, true, 0, nullptr);
        p.hi = fourier_sum(alpha, 2 * M, t, true, 0, nullptr);
    }
    return p;
}

g_estimate g_eval(double alpha, const g_evaluator& cfg) {
    if (cfg.N < 2 || cfg.M < 2)
        throw domain_error("g_eval: caps N, M must be >= 2");
    double vals[4];
    int nv = 0;
    if (cfg.method != g_method::fourier) {
        g_pair p = g_direct_pair(alpha, cfg.N);
        vals[nv++] = p.lo;
        vals[nv++] = p.hi;
    }
    if (cfg.method != g_method::direct) {
        if (!cfg.table)
            throw domain_error("g_eval: fourier evaluation requires a divisor table");
        g_pair p = g_fourier_pair(alpha, cfg.M, *cfg.table, cfg.fejer);
        vals[nv++] = p.lo;
        vals[nv++] = p.hi;
    }
    double sum = 0.0, lo = vals[0], hi = vals[0];
    for (int i = 0; i < nv; ++i) {
        sum += vals[i];
        if (vals[i] < lo) lo = vals[i];
        if (vals[i] > hi) hi = vals[i];
    }
    g_estimate e;
    e.value = sum / nv;
    e.spread = hi - lo;
    e.flagged = e.spread > cfg.tolerance;
    return e;
}

g_decomposition g_decompose(double alpha, int k, double delta,
                            const g_evaluator& cfg) {
    if (k < 1) throw domain_error("g_decompose: k >= 1 required");
    if (!(delta > 0.0) || !(delta < 0.125))
        throw domain_error("g_decompose: delta in (0, 1/8) required");
    double l0 = std::exp(2.0 * k);
    double cap_hi = std::exp(2.0 * k * (1.0 + 2.0 * delta));
    if (cap_hi > static_cast<double>(direct_cap_limit))
        throw domain_error("g_decompose: upper cap l0^(1+2delta) = " +
                           std::to_string(cap_hi) +
                           " exceeds the direct-series feasibility bound 1e8");
    auto L1 = static_cast<std::uint64_t>(std::floor(std::exp(2.0 * k * (1.0 - 2.0 * delta))));
    auto L2 = static_cast<std::uint64_t>(std::floor(cap_hi));
    g_decomposition dec;
    dec.k = k;
    dec.delta = delta;
    dec.l0 = l0;
    dec.L1 = L1;
    dec.L2 = L2;
    dec.g1 = g_direct_slice(alpha, 0, L1);
    dec.g2 = g_direct_slice(alpha, L1, L2);
    dec.est = g_eval(alpha, cfg);
    dec.g3 = dec.est.value - dec.g1 - dec.g2;
    return dec;
}

double z_tau_exact(std::uint64_t x, double theta, const divisor_table& t) {
    if (x > t.limit)
        throw domain_error("z_tau_exact: cap x=" + std::to_string(x) +
                           " exceeds divisor table limit " + std::to_string(t.limit));
    double a = theta - std::floor(theta);
    dyadic_frac d = to_dyadic(a);
    neumaier_sum acc;
    if (d.fast) {
        const std::uint64_t mask =
            (d.e == 63) ? 0x7FFFFFFFFFFFFFFFULL : ((1ULL << d.e) - 1);
        const double inv = std::ldexp(1.0, -d.e);
        for (std::uint64_t n = 1; n <= x; ++n) {
            std::uint64_t r = (n * d.num) & mask;
            acc.add(static_cast<double>(t.tau[n]) *
                    sin_two_pi_frac(static_cast<double>(r) * inv));
        }
    } else {
        for (std::uint64_t n = 1; n <= x; ++n) {
            double u = static_cast<double>(n) * a;
            acc.add(static_cast<double>(t.tau[n]) * sin_two_pi_frac(u - std::floor(u)));
        }
    }
    return acc.value();
}

} // namespace cotlab
