#pragma once

#include "cotlab/fraction.hpp"
#include "cotlab/gseries.hpp"
#include "cotlab/parallel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cotlab {

// The moments H_k of the limiting law appear in two normalizations that
// differ by the exact factor 4^k: integrals of (g/2pi)^{2k} and of (g/pi)^{2k}.
// Both are first-class here; conversions are exact powers of two, so the
// shared-seed covariance test holds bitwise.
enum class normalization { two_pi, pi };
enum class moment_method { quadrature, cotangent, absolute };

const char* to_string(normalization n);
const char* to_string(moment_method m);

struct moment_estimate {
    int k = 0;  // the moment index; holds L for absolute moments
    double value = 0.0;
    double stderr_ = 0.0;
    moment_method method = moment_method::quadrature;
    normalization norm = normalization::two_pi;
    bool norm_applicable = true;  // false for cotangent/absolute rows
    std::uint64_t n = 0;          // samples, or window count for cotangent
    std::uint64_t seed = 0;
    std::uint64_t rejected = 0;   // spread-flagged evaluations resampled
    std::int64_t b = 0;           // cotangent rows only
};

// Stratified Monte Carlo over 1024 equal-width strata with per-stratum
// derived seeds; spread-flagged g evaluations are rejected and resampled
// (capped, count reported). k <= 12, nSamples >= 10^4.
moment_estimate hk_quadrature(int k, std::uint64_t nSamples, std::uint64_t seed,
                              const g_evaluator& cfg, normalization norm,
                              const parallel_map& pm = parallel_map(1));

// one g pass shared across all requested k; each row is bitwise identical to
// the corresponding single hk_quadrature call with the same seed
std::vector<moment_estimate> hk_quadrature_batch(const std::vector<int>& ks,
                                                 std::uint64_t nSamples,
                                                 std::uint64_t seed,
                                                 const g_evaluator& cfg,
                                                 normalization norm,
                                                 const parallel_map& pm = parallel_map(1));

// phi(b)^{-1} b^{-2k} (a1-a0)^{-1} sum over the coprime window of c0(r/b)^{2k}
// an exact finite average (stderr 0, the only error is finite-b bias);
// b >= 100, empty window -> domain_error
moment_estimate hk_from_cotangent(std::int64_t b, int k, const window& w,
                                  const parallel_map& pm = parallel_map(1));

// stratified MC estimate of the absolute moment integral of |g|^L, L <= 24
moment_estimate abs_moment(int L, std::uint64_t nSamples, std::uint64_t seed,
                           const g_evaluator& cfg,
                           const parallel_map& pm = parallel_map(1));

std::vector<moment_estimate> abs_moment_batch(const std::vector<int>& Ls,
                                              std::uint64_t nSamples,
                                              std::uint64_t seed,
                                              const g_evaluator& cfg,
                                              const parallel_map& pm = parallel_map(1));

struct radius_row {
    int k;
    double Hk;
    double rho_k;  // (Hk/(2k)!)^{1/k}, log-domain arithmetic
};

struct radius_report {
    std::vector<radius_row> rows;
    normalization norm = normalization::two_pi;
    double cFit = 0.0;      // max over absolute rows of value^{1/L}/L
    bool has_cfit = false;
    // max rho_k >= 1/pi^2 - tolerance: consistency with the limsup lower
    // bound of the moment growth (pi normalization)
    bool limsup_flag = false;
    // every rho_k <= (cFit * e / D)^2, the envelope implied by
    // |g|-moment growth C^L L^L together with (2k)! >= (2k)^{2k} e^{-2k}
    bool envelope_flag = false;
    double tolerance = 0.0;
};

// rho_k table from quadrature/cotangent rows with k >= 1 (k = 0 excluded:
// the 1/k exponent is undefined); absolute rows feed the envelope fit C.
// Mixed normalizations among the moment rows -> domain_error.
radius_report radius_diagnostics(const std::vector<moment_estimate>& moments);

// exact integer factorial, n <= 33 (fits unsigned 128-bit)
unsigned __int128 factorial_u128(int n);
std::string u128_to_string(unsigned __int128 v);

// x^e by plain repeated multiplication; keeps exact power-of-two scale
// factors exact, which the normalization covariance test relies on
double ipow(double x, unsigned e);

} // namespace cotlab
