#pragma once

#include "cotlab/contfrac.hpp"
#include "cotlab/fraction.hpp"
#include "cotlab/gseries.hpp"
#include "cotlab/parallel.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace cotlab {

// Sorted sample set with right-continuous empirical CDF queries.
class empirical_cdf {
public:
    explicit empirical_cdf(std::vector<double> samples);  // empty -> domain_error

    std::size_t n() const { return v_.size(); }
    const std::vector<double>& samples() const { return v_; }

    double f_hat(double z) const;     // (#samples <= z)/n
    double quantile(double p) const;  // p in [0,1], order statistic
    double abs_tail_fraction(double t) const;  // (#samples with |v| >= t)/n

    empirical_cdf scaled(double factor) const;  // factor > 0

private:
    std::vector<double> v_;
};

// sup_z |F_A(z) - F_B(z)| over the merged jump points
double ks_distance(const empirical_cdf& A, const empirical_cdf& B);

struct sample_f_report {
    std::vector<double> values;  // sorted g samples
    std::uint64_t flagged = 0;   // evaluations resampled for excess spread
    bool warning = false;        // flagged fraction exceeded 1%
};

// g at uniform alpha samples (256 deterministic chunks), flagged evaluations
// resampled with a capped retry budget; nSamples >= 10^4
sample_f_report sample_F(std::uint64_t nSamples, std::uint64_t seed,
                         const g_evaluator& cfg,
                         const parallel_map& pm = parallel_map(1));

struct equidist_cell {
    double alpha, beta;   // cell bounds on the c0(r/b)/b axis
    std::uint64_t count;  // window residues with c0(r/b)/b in (alpha, beta]
    double lhs;           // count/phi(b)
    double rhs;           // (a1-a0) * (F(beta) - F(alpha))
    double abs_err;
};

struct equidist_report {
    std::int64_t b;
    double a0, a1;
    std::uint64_t phi_b;
    std::uint64_t window_count;
    std::vector<equidist_cell> cells;
    double max_abs_err;
    // midpoint-convention KS between the window law of c0(r/b)/b and the
    // reference CDF: max_i |(i - 1/2)/n - F(v_i)| (the reference is a
    // continuous law approximated empirically, the data are discrete)
    double ks;
};

// cells are scored half-open (alpha, beta], so a partition grid keeps the
// counts an exact partition of the window count; fhat must come from >= 10^5
// samples, b >= 1000, empty window -> domain_error
equidist_report equidist_experiment(const window& w,
                                    const std::vector<std::pair<double, double>>& grid,
                                    const empirical_cdf& fhat,
                                    const parallel_map& pm = parallel_map(1));

struct tail_fit {
    std::vector<double> t;
    std::vector<double> measure;   // fraction of samples with |g| >= t
    std::vector<double> stderr_;   // binomial
    std::vector<double> log_measure;
    double slope = 0.0;      // least squares of log-measure vs t
    double intercept = 0.0;
    bool fit_ok = false;     // needs >= 2 thresholds with >= 50 hits
    std::uint64_t n = 0;
};

// thresholds must be positive ascending; estimates are returned even when the
// fit is unavailable
tail_fit tail_measure(const std::vector<double>& thresholds,
                      const empirical_cdf& samples);

struct scatter_point {
    double c_trunc;  // c(alpha, R) truncated per the contfrac tail policy
    double abs_g;
};

struct scatter_report {
    std::vector<scatter_point> points;
    double c2 = 0.0, c3 = 0.0;  // minimal envelope |g| <= c2*c + c3 over all points
    std::uint64_t dropped = 0;  // per-sample expansion failures
};

// samples alpha, pairs the truncated Brjuno-type sum c(alpha, R) with |g|;
// the (c2, c3) envelope minimizes total slack subject to covering every point
scatter_report g_vs_c_scatter(std::uint64_t nSamples, std::uint64_t seed,
                              const g_evaluator& cfg, int cfDepth,
                              const parallel_map& pm = parallel_map(1));

struct decomposition_report {
    int k;
    double delta;
    std::uint64_t n_interval;  // samples drawn in I(k) = [0, e^{-2k}]
    std::uint64_t n_full;      // samples drawn in [0,1] for the g2 sweep
    double min_g1;             // over I(k) samples
    double bound_g1;           // (1-8 delta) 2k
    double max_abs_g2;         // over [0,1] samples
    double bound_g2;           // 16 delta k
    double frac_g3;            // fraction of I(k) samples with |g3| > delta*k
    double g3_threshold;       // delta*k
    double frac_bound_measure; // e^{-2k(1+delta)} / |I(k)| = e^{-2k delta}
    double frac_bound_half;    // 1/2
    double identity_max_err;   // max |g1+g2+g3 - g_eval value| (0 by construction)
    std::uint64_t flagged;
    std::uint64_t seed;
};

// k in {1,2,3}, delta in [0.02, 0.1]; evaluates the three decomposition
// bounds over seeded samples
decomposition_report decomposition_bounds(int k, double delta,
                                          std::uint64_t nSamples,
                                          std::uint64_t seed,
                                          const g_evaluator& cfg,
                                          const parallel_map& pm = parallel_map(1));

} // namespace cotlab
