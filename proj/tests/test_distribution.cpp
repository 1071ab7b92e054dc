#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cotlab/distribution.hpp"
#include "cotlab/errors.hpp"
#include "cotlab/fraction.hpp"
#include "cotlab/gseries.hpp"
#include "cotlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

using namespace cotlab;

namespace {

g_evaluator direct_cfg(std::uint64_t N = 2000) {
    g_evaluator cfg;
    cfg.method = g_method::direct;
    cfg.N = N;
    return cfg;
}

double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
    empirical_cdf A(a), B(b);
    std::vector<double> pts = a;
    pts.insert(pts.end(), b.begin(), b.end());
    double best = 0.0;
    for (double z : pts) best = std::max(best, std::fabs(A.f_hat(z) - B.f_hat(z)));
    return best;
}

} // namespace

TEST_CASE("empirical_cdf orders samples and answers queries") {
    empirical_cdf F({3.0, 1.0, 2.0});
    CHECK(F.n() == 3);
    CHECK(F.samples() == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(F.f_hat(0.0) == 0.0);
    CHECK(F.f_hat(1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(F.f_hat(2.5) == doctest::Approx(2.0 / 3.0));
    CHECK(F.f_hat(3.0) == 1.0);
    CHECK(F.quantile(0.0) == 1.0);
    CHECK(F.quantile(0.5) == 2.0);
    CHECK(F.quantile(1.0) == 3.0);
    CHECK_THROWS_AS(F.quantile(1.5), domain_error);
    CHECK_THROWS_AS(empirical_cdf(std::vector<double>{}), domain_error);
}

TEST_CASE("abs_tail_fraction counts both tails") {
    empirical_cdf F({-2.0, -1.0, 1.0, 3.0});
    CHECK(F.abs_tail_fraction(1.0) == 1.0);
    CHECK(F.abs_tail_fraction(2.0) == 0.5);
    CHECK(F.abs_tail_fraction(3.5) == 0.0);
    CHECK(F.abs_tail_fraction(0.0) == 1.0);
    CHECK(F.abs_tail_fraction(-1.0) == 1.0);
}

TEST_CASE("empirical_cdf scaling") {
    empirical_cdf F({-1.0, 2.0});
    empirical_cdf G = F.scaled(0.5);
    CHECK(G.samples() == std::vector<double>{-0.5, 1.0});
    CHECK_THROWS_AS(F.scaled(0.0), domain_error);
    CHECK_THROWS_AS(F.scaled(-2.0), domain_error);
}

TEST_CASE("ks_distance extremes and brute-force agreement") {
    empirical_cdf A({1.0, 2.0, 3.0});
    CHECK(ks_distance(A, A) == 0.0);
    empirical_cdf B({10.0, 11.0});
    CHECK(ks_distance(A, B) == 1.0);
    xoshiro256ss rng(55);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + rng.next() % 40), b(1 + rng.next() % 40);
        for (auto& v : a) v = static_cast<double>(rng.next() % 21);
        for (auto& v : b) v = static_cast<double>(rng.next() % 21);
        empirical_cdf FA(a), FB(b);
        CHECK(ks_distance(FA, FB) == brute_ks(a, b));
        CHECK(ks_distance(FA, FB) == ks_distance(FB, FA));
    }
}

TEST_CASE("sample_F draws a symmetric sorted sample of g") {
    sample_f_report rep = sample_F(20000, 11, direct_cfg());
    REQUIRE(rep.values.size() == 20000);
    CHECK(std::is_sorted(rep.values.begin(), rep.values.end()));
    empirical_cdf F(rep.values);
    CHECK(std::fabs(F.f_hat(0.0) - 0.5) < 0.02);
    // the law is symmetric: compare against the negated sample
    std::vector<double> neg;
    for (double v : rep.values) neg.push_back(-v);
    CHECK(ks_distance(F, empirical_cdf(neg)) < 0.03);
    CHECK_THROWS_AS(sample_F(9999, 11, direct_cfg()), domain_error);
}

TEST_CASE("sample_F is worker-count invariant") {
    sample_f_report a = sample_F(10000, 4, direct_cfg(), parallel_map(1));
    sample_f_report b = sample_F(10000, 4, direct_cfg(), parallel_map(3));
    CHECK(a.values == b.values);
    CHECK(a.flagged == b.flagged);
}

TEST_CASE("tail_measure decays with negative fitted slope") {
    sample_f_report rep = sample_F(20000, 19, direct_cfg());
    empirical_cdf F(rep.values);
    tail_fit fit = tail_measure({0.5, 1.0, 2.0, 3.0}, F);
    REQUIRE(fit.t.size() == 4);
    for (std::size_t i = 0; i + 1 < fit.measure.size(); ++i)
        CHECK(fit.measure[i] >= fit.measure[i + 1]);
    CHECK(fit.measure[0] > 0.2);
    CHECK(fit.fit_ok);
    CHECK(fit.slope < 0.0);
    for (double se : fit.stderr_) CHECK(se >= 0.0);
    CHECK(fit.n == 20000);
}

TEST_CASE("tail_measure validates thresholds and reports fit availability") {
    empirical_cdf F({0.1, 0.9, 1.4, 2.2, -0.3, 0.8, -1.7, 1.1});
    CHECK_THROWS_AS(tail_measure({}, F), domain_error);
    CHECK_THROWS_AS(tail_measure({1.0, 0.5}, F), domain_error);
    CHECK_THROWS_AS(tail_measure({-1.0, 1.0}, F), domain_error);
    CHECK_THROWS_AS(tail_measure({0.0, 1.0}, F), domain_error);
    tail_fit single = tail_measure({1.0}, F);  // one threshold, no line to fit
    CHECK(!single.fit_ok);
    CHECK(single.slope == 0.0);
}

TEST_CASE("equidist_experiment partitions the window exactly") {
    sample_f_report rep = sample_F(100000, 29, direct_cfg());
    std::vector<double> scaled;
    for (double v : rep.values) scaled.push_back(v / 3.14159265358979323846);
    empirical_cdf fhat(scaled);

    std::vector<std::pair<double, double>> grid;
    const int cells = 8;
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < cells; ++j) {
        double edge = fhat.quantile(static_cast<double>(j) / cells);
        grid.emplace_back(prev, edge);
        prev = edge;
    }
    grid.emplace_back(prev, std::numeric_limits<double>::infinity());

    window w = make_window(1009, 0.51, 0.99);
    equidist_report repq = equidist_experiment(w, grid, fhat);
    CHECK(repq.b == 1009);
    CHECK(repq.phi_b == 1008);
    std::uint64_t total = 0;
    for (const auto& c : repq.cells) {
        total += c.count;
        CHECK(c.lhs == static_cast<double>(c.count) / 1008.0);
        CHECK(c.abs_err == std::fabs(c.lhs - c.rhs));
    }
    CHECK(total == repq.window_count);
    CHECK(repq.max_abs_err < 0.08);
    CHECK(repq.ks < 0.1);
}

TEST_CASE("equidist_experiment validates modulus, reference size, and window") {
    sample_f_report rep = sample_F(100000, 29, direct_cfg());
    empirical_cdf fhat(rep.values);
    std::vector<std::pair<double, double>> grid{{-100.0, 100.0}};
    CHECK_THROWS_AS(equidist_experiment(make_window(999, 0.51, 0.99), grid, fhat),
                    domain_error);
    sample_f_report small = sample_F(50000, 29, direct_cfg());
    empirical_cdf tiny(small.values);
    CHECK_THROWS_AS(equidist_experiment(make_window(1009, 0.51, 0.99), grid, tiny),
                    domain_error);
    CHECK_THROWS_AS(
        equidist_experiment(make_window(1009, 0.9991, 0.9999), grid, fhat),
        domain_error);
}

TEST_CASE("scatter pairs c with |g| under a covering envelope") {
    scatter_report rep = g_vs_c_scatter(500, 3, direct_cfg(), 48);
    CHECK(rep.points.size() + rep.dropped == 500);
    REQUIRE(!rep.points.empty());
    for (const auto& p : rep.points) {
        CHECK(p.c_trunc >= 0.0);
        CHECK(p.abs_g >= 0.0);
        CHECK(p.abs_g < 12.0);  // tail sanity; meas{|g| >= 12} ~ 1e-5
        CHECK(p.abs_g <= rep.c2 * p.c_trunc + rep.c3 + 1e-9);
    }
    CHECK(rep.c2 >= 0.0);
    CHECK_THROWS_AS(g_vs_c_scatter(99, 3, direct_cfg(), 48), domain_error);
    CHECK_THROWS_AS(g_vs_c_scatter(500, 3, direct_cfg(), 1), domain_error);
}

TEST_CASE("decomposition_bounds reports exact bound constants") {
    decomposition_report rep = decomposition_bounds(2, 0.05, 2000, 15, direct_cfg());
    CHECK(rep.k == 2);
    CHECK(rep.n_interval == 2000);
    CHECK(rep.n_full == 2000);
    CHECK(rep.identity_max_err == 0.0);
    CHECK(rep.bound_g1 == doctest::Approx((1.0 - 8.0 * 0.05) * 4.0).epsilon(1e-15));
    CHECK(rep.bound_g2 == doctest::Approx(16.0 * 0.05 * 2.0).epsilon(1e-15));
    CHECK(rep.g3_threshold == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(rep.frac_bound_measure == doctest::Approx(std::exp(-0.2)).epsilon(1e-15));
    CHECK(rep.frac_bound_half == 0.5);
    // calibrated sampled statistics, generous brackets
    CHECK(rep.min_g1 > 2.6);
    CHECK(rep.min_g1 < 3.2);
    CHECK(rep.max_abs_g2 > 0.55);
    CHECK(rep.max_abs_g2 < 0.95);
    CHECK(rep.frac_g3 > 0.25);
    CHECK(rep.frac_g3 < 0.6);
}

TEST_CASE("decomposition_bounds is deterministic and validated") {
    decomposition_report a = decomposition_bounds(1, 0.05, 1000, 8, direct_cfg(),
                                                  parallel_map(1));
    decomposition_report b = decomposition_bounds(1, 0.05, 1000, 8, direct_cfg(),
                                                  parallel_map(3));
    CHECK(a.min_g1 == b.min_g1);
    CHECK(a.max_abs_g2 == b.max_abs_g2);
    CHECK(a.frac_g3 == b.frac_g3);
    CHECK_THROWS_AS(decomposition_bounds(4, 0.05, 1000, 8, direct_cfg()), domain_error);
    CHECK_THROWS_AS(decomposition_bounds(2, 0.15, 1000, 8, direct_cfg()), domain_error);
    CHECK_THROWS_AS(decomposition_bounds(2, 0.01, 1000, 8, direct_cfg()), domain_error);
    CHECK_THROWS_AS(decomposition_bounds(2, 0.05, 99, 8, direct_cfg()), domain_error);
}
