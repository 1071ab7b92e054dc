#include "cotlab/distribution.hpp"

#include "cotlab/cotangent.hpp"
#include "cotlab/dyadic.hpp"
#include "cotlab/errors.hpp"
#include "cotlab/rng.hpp"
#include "cotlab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cotlab {

namespace {
constexpr std::uint64_t mc_chunks = 256;
constexpr int max_resample_per_draw = 64;
}

// ------------------------------------------------------------ empirical cdf

empirical_cdf::empirical_cdf(std::vector<double> samples) : v_(std::move(samples)) {
    if (v_.empty()) throw domain_error("empirical_cdf: empty sample set");
    std::sort(v_.begin(), v_.end());
}

double empirical_cdf::f_hat(double z) const {
    auto it = std::upper_bound(v_.begin(), v_.end(), z);
    return static_cast<double>(it - v_.begin()) / static_cast<double>(v_.size());
}

double empirical_cdf::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
        throw domain_error("empirical_cdf: quantile level must lie in [0,1]");
    if (p <= 0.0) return v_.front();
    auto idx = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(v_.size()))) - 1;
    if (idx >= v_.size()) idx = v_.size() - 1;
    return v_[idx];
}

double empirical_cdf::abs_tail_fraction(double t) const {
    if (t <= 0.0) return 1.0;
    std::size_t above = v_.end() - std::lower_bound(v_.begin(), v_.end(), t);
    std::size_t below = std::upper_bound(v_.begin(), v_.end(), -t) - v_.begin();
    return static_cast<double>(above + below) / static_cast<double>(v_.size());
}

empirical_cdf empirical_cdf::scaled(double factor) const {
    if (!(factor > 0.0)) throw domain_error("empirical_cdf: scale factor must be positive");
    std::vector<double> out(v_);
    for (double& x : out) x *= factor;
    return empirical_cdf(std::move(out));
}

double ks_distance(const empirical_cdf& A, const empirical_cdf& B) {
    const auto& a = A.samples();
    const auto& b = B.samples();
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double z = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
        while (i < a.size() && a[i] <= z) ++i;
        while (j < b.size() && b[j] <= z) ++j;
        double diff = std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb);
        if (diff > d) d = diff;
    }
    return d;
}

// ---------------------------------------------------------------- sample_F

sample_f_report sample_F(std::uint64_t nSamples, std::uint64_t seed,
                         const g_evaluator& cfg, const parallel_map& pm) {
    if (nSamples < 10000) throw domain_error("sample_F: nSamples >= 10^4 required");
    std::vector<std::vector<double>> chunk_vals(mc_chunks);
    std::vector<std::uint64_t> chunk_flagged(mc_chunks, 0);
    pm.for_tasks(mc_chunks, [&](std::size_t c) {
        std::uint64_t quota = nSamples / mc_chunks + (c < nSamples % mc_chunks ? 1 : 0);
        xoshiro256ss rng(derive_seed(seed, c));
        auto& vals = chunk_vals[c];
        vals.reserve(quota);
        std::uint64_t flagged = 0;
        for (std::uint64_t i = 0; i < quota; ++i) {
            g_estimate est{};
            for (int attempt = 0; attempt < max_resample_per_draw; ++attempt) {
                est = g_eval(rng.uniform01_open(), cfg);
                if (!est.flagged) break;
                ++flagged;
            }
            vals.push_back(est.value);
        }
        chunk_flagged[c] = flagged;
    });
    sample_f_report rep;
    rep.values.reserve(nSamples);
    for (std::size_t c = 0; c < mc_chunks; ++c) {
        rep.values.insert(rep.values.end(), chunk_vals[c].begin(), chunk_vals[c].end());
        rep.flagged += chunk_flagged[c];
    }
    std::sort(rep.values.begin(), rep.values.end());
    rep.warning =
        static_cast<double>(rep.flagged) > 0.01 * static_cast<double>(nSamples);
    return rep;
}

// ------------------------------------------------------------ equidistribution

equidist_report equidist_experiment(const window& w,
                                    const std::vector<std::pair<double, double>>& grid,
                                    const empirical_cdf& fhat,
                                    const parallel_map& pm) {
    if (w.b < 1000) throw domain_error("equidist_experiment: b >= 1000 required");
    if (fhat.n() < 100000)
        throw domain_error("equidist_experiment: reference CDF needs >= 10^5 samples");
    if (grid.empty()) throw domain_error("equidist_experiment: empty cell grid");
    std::vector<scaled_c0> sc = c0_window_scaled(w, pm);
    if (sc.empty()) throw domain_error("equidist_experiment: the coprime window is empty");
    std::vector<double> vals;
    vals.reserve(sc.size());
    for (const auto& s : sc) vals.push_back(s.scaled);
    std::sort(vals.begin(), vals.end());
    equidist_report rep;
    rep.b = w.b;
    rep.a0 = w.a0;
    rep.a1 = w.a1;
    rep.phi_b = euler_phi(static_cast<std::uint64_t>(w.b));
    rep.window_count = vals.size();
    rep.max_abs_err = 0.0;
    const double phi = static_cast<double>(rep.phi_b);
    const double width = w.a1 - w.a0;
    for (const auto& [alpha, beta] : grid) {
        if (!(alpha <= beta))
            throw domain_error("equidist_experiment: cell with alpha > beta");
        equidist_cell cell;
        cell.alpha = alpha;
        cell.beta = beta;
        auto lo = std::upper_bound(vals.begin(), vals.end(), alpha);
        auto hi = std::upper_bound(vals.begin(), vals.end(), beta);
        cell.count = static_cast<std::uint64_t>(hi - lo);
        cell.lhs = static_cast<double>(cell.count) / phi;
        cell.rhs = width * (fhat.f_hat(beta) - fhat.f_hat(alpha));
        cell.abs_err = std::fabs(cell.lhs - cell.rhs);
        if (cell.abs_err > rep.max_abs_err) rep.max_abs_err = cell.abs_err;
        rep.cells.push_back(cell);
    }
    // midpoint-convention KS of the discrete window points against fhat
    double ks = 0.0;
    const double n = static_cast<double>(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double diff = std::fabs((static_cast<double>(i) + 0.5) / n - fhat.f_hat(vals[i]));
        if (diff > ks) ks = diff;
    }
    rep.ks = ks;
    return rep;
}

// ------------------------------------------------------------------- tails

tail_fit tail_measure(const std::vector<double>& thresholds,
                      const empirical_cdf& samples) {
    if (thresholds.empty()) throw domain_error("tail_measure: no thresholds");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0))
            throw domain_error("tail_measure: thresholds must be positive");
        if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
            throw domain_error("tail_measure: thresholds must be strictly ascending");
    }
    tail_fit fit;
    fit.n = samples.n();
    const double n = static_cast<double>(samples.n());
    std::vector<double> xs, ys;
    for (double t : thresholds) {
        double p = samples.abs_tail_fraction(t);
        fit.t.push_back(t);
        fit.measure.push_back(p);
        fit.stderr_.push_back(std::sqrt(p * (1.0 - p) / n));
        double lg = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
        fit.log_measure.push_back(lg);
        if (p * n >= 50.0) {
            xs.push_back(t);
            ys.push_back(lg);
        }
    }
    if (xs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        double denom = m * sxx - sx * sx;
        if (denom > 0.0) {
            fit.slope = (m * sxy - sx * sy) / denom;
            fit.intercept = (sy - fit.slope * sx) / m;
            fit.fit_ok = true;
        }
    }
    return fit;
}

// ----------------------------------------------------------------- scatter

scatter_report g_vs_c_scatter(std::uint64_t nSamples, std::uint64_t seed,
                              const g_evaluator& cfg, int cfDepth,
                              const parallel_map& pm) {
    if (nSamples < 100) throw domain_error("g_vs_c_scatter: nSamples >= 100 required");
    if (cfDepth < 2) throw domain_error("g_vs_c_scatter: cfDepth >= 2 required");
    constexpr std::int64_t qb = static_cast<std::int64_t>(1) << 62;
    const double A = std::sqrt(2.0);
    std::vector<std::vector<scatter_point>> chunk_pts(mc_chunks);
    std::vector<std::uint64_t> chunk_drop(mc_chunks, 0);
    pm.for_tasks(mc_chunks, [&](std::size_t c) {
        std::uint64_t quota = nSamples / mc_chunks + (c < nSamples % mc_chunks ? 1 : 0);
        xoshiro256ss rng(derive_seed(seed, c));
        for (std::uint64_t i = 0; i < quota; ++i) {
            double alpha = rng.uniform01_open();
            double g = g_eval(alpha, cfg).value;
            try {
                dyadic_frac d = to_dyadic(alpha);
                cf_expansion cf = cf_expand(static_cast<std::int64_t>(d.num),
                                            static_cast<std::int64_t>(1) << d.e,
                                            cfDepth, qb);
                double cval = c_alpha_inf(cf, A, qb, 1e-6);
                chunk_pts[c].push_back({cval, std::fabs(g)});
            } catch (const std::exception&) {
                ++chunk_drop[c];
            }
        }
    });
    scatter_report rep;
    for (std::size_t c = 0; c < mc_chunks; ++c) {
        rep.points.insert(rep.points.end(), chunk_pts[c].begin(), chunk_pts[c].end());
        rep.dropped += chunk_drop[c];
    }
    if (rep.points.empty()) throw domain_error("g_vs_c_scatter: every sample was dropped");
    // envelope |g| <= c2*c + c3: minimize total slack
    //   h(c2) = c2 * sum(x) + n * max_i(y_i - c2 x_i) - sum(y)
    // which is convex piecewise-linear in c2; ternary search then recover c3
    double sumx = 0.0;
    for (const auto& p : rep.points) sumx += p.c_trunc;
    const double np = static_cast<double>(rep.points.size());
    auto slack = [&](double c2) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& p : rep.points) {
            double s = p.abs_g - c2 * p.c_trunc;
            if (s > worst) worst = s;
        }
        return c2 * sumx + np * worst;
    };
    double lo = 0.0, hi = 1000.0;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (slack(m1) <= slack(m2)) hi = m2;
        else lo = m1;
    }
    rep.c2 = 0.5 * (lo + hi);
    double c3 = -std::numeric_limits<double>::infinity();
    for (const auto& p : rep.points) {
        double s = p.abs_g - rep.c2 * p.c_trunc;
        if (s > c3) c3 = s;
    }
    rep.c3 = c3;
    return rep;
}

// ----------------------------------------------------- decomposition bounds

decomposition_report decomposition_bounds(int k, double delta, std::uint64_t nSamples,
                                          std::uint64_t seed, const g_evaluator& cfg,
                                          const parallel_map& pm) {
    if (k < 1 || k > 3) throw domain_error("decomposition_bounds: k in {1,2,3} required");
    if (!(delta >= 0.02) || !(delta <= 0.1))
        throw domain_error("decomposition_bounds: delta in [0.02, 0.1] required");
    if (nSamples < 100)
        throw domain_error("decomposition_bounds: nSamples >= 100 required");
    // same cap expressions as g_decompose, so the sweeps use identical slices
    const auto L1 = static_cast<std::uint64_t>(
        std::floor(std::exp(2.0 * k * (1.0 - 2.0 * delta))));
    const auto L2 = static_cast<std::uint64_t>(
        std::floor(std::exp(2.0 * k * (1.0 + 2.0 * delta))));
    const double ik_width = std::exp(-2.0 * k);
    const double g3_threshold = delta * k;

    struct part {
        double min_g1 = std::numeric_limits<double>::infinity();
        std::uint64_t g3_hits = 0;
        double identity_err = 0.0;
        std::uint64_t flagged = 0;
    };
    std::vector<part> parts(mc_chunks);
    pm.for_tasks(mc_chunks, [&](std::size_t c) {
        std::uint64_t quota = nSamples / mc_chunks + (c < nSamples % mc_chunks ? 1 : 0);
        xoshiro256ss rng(derive_seed(seed, c));
        part& p = parts[c];
        for (std::uint64_t i = 0; i < quota; ++i) {
            double alpha = rng.uniform01_open() * ik_width;
            g_decomposition dec = g_decompose(alpha, k, delta, cfg);
            if (dec.g1 < p.min_g1) p.min_g1 = dec.g1;
            if (std::fabs(dec.g3) > g3_threshold) ++p.g3_hits;
            // same association that defined g3, so a correct decomposition
            // reports exactly zero
            double err = std::fabs((dec.est.value - dec.g1 - dec.g2) - dec.g3);
            if (err > p.identity_err) p.identity_err = err;
            if (dec.est.flagged) ++p.flagged;
        }
    });
    std::vector<double> maxima(mc_chunks, 0.0);
    pm.for_tasks(mc_chunks, [&](std::size_t c) {
        std::uint64_t quota = nSamples / mc_chunks + (c < nSamples % mc_chunks ? 1 : 0);
        xoshiro256ss rng(derive_seed(seed, 1000 + c));
        double mx = 0.0;
        for (std::uint64_t i = 0; i < quota; ++i) {
            double v = std::fabs(g_direct_slice(rng.uniform01_open(), L1, L2));
            if (v > mx) mx = v;
        }
        maxima[c] = mx;
    });

    decomposition_report rep;
    rep.k = k;
    rep.delta = delta;
    rep.n_interval = nSamples;
    rep.n_full = nSamples;
    rep.min_g1 = std::numeric_limits<double>::infinity();
    rep.max_abs_g2 = 0.0;
    rep.identity_max_err = 0.0;
    rep.flagged = 0;
    std::uint64_t hits = 0;
    for (std::size_t c = 0; c < mc_chunks; ++c) {
        if (parts[c].min_g1 < rep.min_g1) rep.min_g1 = parts[c].min_g1;
        hits += parts[c].g3_hits;
        if (parts[c].identity_err > rep.identity_max_err)
            rep.identity_max_err = parts[c].identity_err;
        rep.flagged += parts[c].flagged;
        if (maxima[c] > rep.max_abs_g2) rep.max_abs_g2 = maxima[c];
    }
    rep.bound_g1 = (1.0 - 8.0 * delta) * 2.0 * k;
    rep.bound_g2 = 16.0 * delta * k;
    rep.frac_g3 = static_cast<double>(hits) / static_cast<double>(nSamples);
    rep.g3_threshold = g3_threshold;
    rep.frac_bound_measure = std::exp(-2.0 * k * delta);
    rep.frac_bound_half = 0.5;
    rep.seed = seed;
    return rep;
}

} // namespace cotlab
