#pragma once

#include "cotlab/divisor.hpp"

#include <cstdint>

namespace cotlab {

// g(alpha) = sum_{l >= 1} (1 - 2{l alpha})/l, evaluated two independent ways:
// the direct sawtooth series and the Fourier expansion over the divisor
// function. Writing B(u) = (2/pi) sum_k sin(2 pi k u)/k and collecting terms
// gives g(alpha) = (2/pi) sum_m tau(m) sin(2 pi m alpha)/m, which is the
// coefficient set implemented here; the two methods agree to the reported
// spread on sampled irrationals.

// partial sum over the index slice lo < l <= hi (direct method building block)
double g_direct_slice(double alpha, std::uint64_t lo, std::uint64_t hi);

// sum_{l <= N} B(l alpha)/l; N = 0 is the empty sum
double g_direct(double alpha, std::uint64_t N);

// one pass to 2N with a snapshot at N: returns {g_direct(alpha, N),
// g_direct(alpha, 2N)} with the second bitwise equal to a fresh evaluation
struct g_pair {
    double lo;
    double hi;
};
g_pair g_direct_pair(double alpha, std::uint64_t N);

// (2/pi) sum_{m <= M} tau(m) sin(2 pi m alpha)/m; Fejer damping (weights
// 1 - m/(M+1)) is strictly opt-in since it changes the estimator's bias
double g_fourier(double alpha, std::uint64_t M, const divisor_table& t,
                 bool fejer = false);

g_pair g_fourier_pair(double alpha, std::uint64_t M, const divisor_table& t,
                      bool fejer = false);

enum class g_method { direct, fourier, cross_checked };

struct g_evaluator {
    g_method method = g_method::cross_checked;
    std::uint64_t N = 1000000;  // direct cap; pair evaluation reaches 2N
    std::uint64_t M = 1000000;  // fourier cap; pair evaluation reaches 2M
    const divisor_table* table = nullptr;  // required by fourier/cross_checked
    double tolerance = 0.1;     // spread above this flags the estimate
    bool fejer = false;
};

struct g_estimate {
    double value;   // mean of the method estimates at caps (N,2N)/(M,2M)
    double spread;  // max pairwise discrepancy, the empirical error gauge
    bool flagged;   // spread > tolerance; not fatal, caller decides
};

g_estimate g_eval(double alpha, const g_evaluator& cfg);

// g1/g2/g3 split at l0 = e^{2k}: g1 sums l <= floor(l0^{1-2delta}), g2 the
// slice up to floor(l0^{1+2delta}), g3 := g_eval value - g1 - g2 so the
// three-part identity is exact by construction
struct g_decomposition {
    int k;
    double delta;
    double l0;
    std::uint64_t L1, L2;
    double g1, g2, g3;
    g_estimate est;
};

// k >= 1, delta in (0, 1/8); infeasible caps (l0^{1+2delta} > 1e8) raise a
// domain_error naming the offending cap
g_decomposition g_decompose(double alpha, int k, double delta,
                            const g_evaluator& cfg);

// Z_tau(x, x; theta) = sum_{n <= x} tau(n) sin(2 pi n theta), exact
// compensated sum; x > t.limit -> domain_error
double z_tau_exact(std::uint64_t x, double theta, const divisor_table& t);

} // namespace cotlab
