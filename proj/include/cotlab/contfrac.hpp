#pragma once

#include "cotlab/parallel.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cotlab {

// High-precision real held as a directed-rounding interval [lo, hi]; the
// continued-fraction expander consumes the interval and refuses to guess when
// a partial quotient is not decided by the enclosure (precision_error).
class prec_real {
public:
    prec_real(const prec_real&);
    prec_real(prec_real&&) noexcept;
    prec_real& operator=(const prec_real&);
    prec_real& operator=(prec_real&&) noexcept;
    ~prec_real();

    static prec_real from_fraction(std::int64_t num, std::int64_t den, int precBits);
    static prec_real from_double(double x, int precBits);
    static prec_real from_decimal(const std::string& s, int precBits);
    // (sqrt(D) + P)/Q with directed rounding at both ends; D >= 0, Q != 0
    static prec_real surd(std::int64_t D, std::int64_t P, std::int64_t Q, int precBits);
    static prec_real golden(int precBits);  // (sqrt(5) - 1)/2

    int precision() const;

    struct impl;
    const impl& internals() const { return *impl_; }

private:
    prec_real();
    std::unique_ptr<impl> impl_;
};

// Continued fraction [0; a_1, a_2, ...] with convergents p_r/q_r satisfying
// p_{r+1} = a_{r+1} p_r + p_{r-1}, q likewise, seeded p_{-1}=1, p_0=0,
// q_{-1}=0, q_0=1.
struct cf_expansion {
    enum class stop_reason { exact, depth, qbound };

    std::vector<std::int64_t> a;     // a_1..a_R
    std::vector<std::int64_t> p, q;  // index shifted by 1: p[j] = p_{j-1}
    bool exact_terminated = false;
    stop_reason reason = stop_reason::depth;

    int depth() const { return static_cast<int>(a.size()); }
    std::int64_t a_at(int r) const;  // r in [1, depth]
    std::int64_t p_at(int r) const;  // r in [-1, depth]
    std::int64_t q_at(int r) const;  // r in [-1, depth]
};

// Exact Euclidean expansion of num/den in (0,1). Stops at exact termination,
// at maxDepth quotients, or one step after q_r exceeds qBound (the offending
// convergent is kept: append-then-stop). qBound <= 2^62 required.
cf_expansion cf_expand(std::int64_t num, std::int64_t den, int maxDepth,
                       std::int64_t qBound);

// Interval Gauss-map iteration at working precision max(precBitsOverride,
// 2 log2(qBound) + 64); an undecidable floor raises precision_error rather
// than silently truncating.
cf_expansion cf_expand(const prec_real& x, int maxDepth, std::int64_t qBound,
                       int precBitsOverride = 0);

// T(x) = 1/x - floor(1/x); x = 0 -> domain_error
double gauss_map(double x);

// omega((lo,hi)) = (log(1+hi) - log(1+lo))/log 2; out-of-range -> domain_error
double gauss_measure(double lo, double hi);

// true iff the first `depth` quotients of T^r(x) equal a_{r+1}..a_{r+depth}
// of x; the shifted value is re-expanded independently (exact arithmetic)
bool shift_check(std::int64_t num, std::int64_t den, int r, int depth);
bool shift_check(const prec_real& x, int r, int depth);

// c(alpha, r) = sum_{j=0}^{r} log(q_{j+1})/q_j. Needs q_{r+1}; if the
// expansion terminated exactly at depth R < r+1 the sum saturates at its full
// value (the rational's tail is empty); an expansion cut short by depth or
// qBound instead raises domain_error naming the needed depth.
double c_alpha_r(const cf_expansion& cf, int r);

// c(alpha, +infinity) approximated by c(alpha, R) where R makes the tail
// bound log(qBound) * A^-R / (A-1) <= eps (growth q_j >= A^j); exact
// terminations need no slack
double c_alpha_inf(const cf_expansion& cf, double A, std::int64_t qBound,
                   double eps = 1e-6);

// Threshold ladder w^(r) = 1/2 + cSmall * sum_{j<=r} A^{-j/2} with cSmall
// solving cSmall * sum_{r>=0} A^{-r/2} = 1/4, so w increases to 3/4. The
// growth base defaults to the universal sqrt(2) from q_{r+2} >= 2 q_r.
struct w_sequence {
    double growthBase;
    double cSmall;

    w_sequence();
    explicit w_sequence(double A);

    double w(int r) const;  // closed form, r >= 0
};

// Smallest r <= maxR with alpha in E(z,r), where E(z,0) = {c(alpha,1) >=
// z/2} and E(z,r) = {c(alpha,r-1) < w^(r-1) z, c(alpha,r) >= w^(r) z}.
// E(z,r>=1) is a subset of E(z,0) whenever it fires, so "smallest index"
// makes the classification single-valued. none = no E(z,r) fired up to maxR.
std::optional<int> classify_E(const cf_expansion& cf, double z,
                              const w_sequence& ws, int maxR);

struct mc_estimate {
    double estimate;
    double stderr_;
    std::uint64_t n;
    std::uint64_t seed;
};

// fraction of uniform (0,1) samples classified into E(z,r), binomial stderr;
// samples are exact 53-bit dyadics expanded by exact integer Euclid
mc_estimate measure_E_mc(double z, int r, std::uint64_t nSamples,
                         std::uint64_t seed, const w_sequence& ws,
                         const parallel_map& pm = parallel_map(1));

// one-sided MC for E(z, +infinity) = {c(alpha, +infinity) >= z} using the
// truncated c; truncation only lowers c, so the estimate is a lower bound
mc_estimate measure_E_inf_mc(double z, std::uint64_t nSamples,
                             std::uint64_t seed, const w_sequence& ws,
                             const parallel_map& pm = parallel_map(1));

// exp(-(1/2) cSmall A^{r/2} z), the exceptional-measure decay bound; r = -1
// returns the summed bound over all r >= 0 (terms below 1e-12 truncated)
double e_measure_bound(double z, int r, const w_sequence& ws);

// mu(theta;Q) = min_{1<=m<=Q} ||m theta||, q = least minimizer; computed from
// the convergent denominators of theta (the best approximations of the
// second kind) with exact dyadic arithmetic and integer comparisons
struct best_approx_result {
    std::int64_t q;
    double mu;
};
best_approx_result best_approx(double theta, std::int64_t Q);

// min over 2 <= r <= depth of q_r^{1/r}, the empirical exponential growth
// base; r = 1 is excluded (q_1 = 1 whenever a_1 = 1 would degenerate the fit
// to 1); depth < 2 -> domain_error
double growth_fit(const cf_expansion& cf);

// MC check of Gauss-measure preimage invariance for E = (0,t): samples x by
// inverse CDF x = 2^u - 1, counts gauss_map(x) < t; compare against
// gauss_measure(0, t)
mc_estimate gauss_preimage_mc(double t, std::uint64_t nSamples,
                              std::uint64_t seed,
                              const parallel_map& pm = parallel_map(1));

} // namespace cotlab
