#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cotlab/divisor.hpp"
#include "cotlab/dyadic.hpp"
#include "cotlab/errors.hpp"
#include "cotlab/gseries.hpp"
#include "cotlab/rng.hpp"
#include "cotlab/summation.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

using namespace cotlab;

namespace {

std::uint32_t tau_trial(std::uint32_t n) {
    std::uint32_t count = 0;
    for (std::uint32_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        count += (d * d == n) ? 1u : 2u;
    }
    return count;
}

const divisor_table& shared_table() {
    static divisor_table t = divisor_sieve(2000000);
    return t;
}

} // namespace

TEST_CASE("divisor sieve matches trial division") {
    divisor_table t = divisor_sieve(10000);
    CHECK(t[1] == 1);
    CHECK(t[2] == 2);
    CHECK(t[6] == 4);
    CHECK(t[9] == 3);
    CHECK(t[12] == 6);
    for (std::uint32_t m = 1; m <= 10000; ++m) CHECK(t[m] == tau_trial(m));
    CHECK_THROWS_AS(divisor_sieve(0), domain_error);
}

TEST_CASE("divisor table round-trips through its cache file") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "cotlab-divisor-cache-test";
    fs::create_directories(dir);
    fs::path file = dir / "divisor-64.u32le";
    divisor_table t = divisor_sieve(64);
    REQUIRE(save_divisor_table(t, file.string()));
    auto back = load_divisor_table(file.string());
    REQUIRE(back.has_value());
    CHECK(back->limit == t.limit);
    CHECK(back->tau == t.tau);
    // truncated file fails the size check and reports no table
    fs::resize_file(file, 17);
    CHECK(!load_divisor_table(file.string()).has_value());
    CHECK(!load_divisor_table((dir / "absent.u32le").string()).has_value());
    fs::remove_all(dir);
}

TEST_CASE("sawtooth hits exact dyadic values") {
    CHECK(sawtooth(0.0) == 1.0);
    CHECK(sawtooth(0.25) == 0.5);
    CHECK(sawtooth(0.5) == 0.0);
    CHECK(sawtooth(0.75) == -0.5);
    CHECK(sawtooth(1.0) == 1.0);
    CHECK(sawtooth(2.25) == 0.5);
}

TEST_CASE("dyadic_sawtooth equals the integer-residue formula") {
    xoshiro256ss rng(99);
    for (int i = 0; i < 200; ++i) {
        double alpha = rng.uniform01_open();
        dyadic_frac d = to_dyadic(alpha);
        REQUIRE(d.fast);
        dyadic_sawtooth B(d);
        for (std::uint64_t l : {1ull, 2ull, 3ull, 97ull, 9999ull}) {
            unsigned __int128 prod =
                static_cast<unsigned __int128>(l) * d.num;
            std::uint64_t r = static_cast<std::uint64_t>(
                prod & ((static_cast<unsigned __int128>(1) << d.e) - 1));
            double expect;
            if (r == 0) {
                expect = 1.0;
            } else {
                long long numer = static_cast<long long>((1ULL << d.e)) -
                                  2ll * static_cast<long long>(r);
                expect = static_cast<double>(numer) * std::ldexp(1.0, -d.e);
            }
            CHECK(B(l) == expect);
        }
    }
}

TEST_CASE("g_direct basic structure") {
    CHECK(g_direct(0.3, 0) == 0.0);
    double a = 0.37548718261718750;  // exact dyadic
    CHECK(g_direct(a, 5000) == g_direct_slice(a, 0, 5000));
    g_pair p = g_direct_pair(a, 5000);
    CHECK(p.lo == g_direct(a, 5000));
    CHECK(p.hi == g_direct(a, 10000));
    CHECK_THROWS_AS(g_direct_slice(0.3, 0, 200000001), domain_error);
}

TEST_CASE("g_direct mirror antisymmetry is bitwise") {
    xoshiro256ss rng(7);
    for (int i = 0; i < 1000; ++i) {
        double alpha = rng.uniform01_open();
        if (alpha == 0.5) continue;
        CHECK(g_direct(alpha, 3000) == -g_direct(1.0 - alpha, 3000));
    }
}

TEST_CASE("g_fourier mirror antisymmetry is bitwise") {
    const divisor_table& t = shared_table();
    xoshiro256ss rng(8);
    for (int i = 0; i < 300; ++i) {
        double alpha = rng.uniform01_open();
        if (alpha == 0.5) continue;
        CHECK(g_fourier(alpha, 20000, t) == -g_fourier(1.0 - alpha, 20000, t));
    }
}

TEST_CASE("g_fourier pair snapshots match fresh evaluations") {
    const divisor_table& t = shared_table();
    double a = 0.61803398874989479;  // golden ratio conjugate rounded to double
    g_pair p = g_fourier_pair(a, 40000, t);
    CHECK(p.lo == g_fourier(a, 40000, t));
    CHECK(p.hi == g_fourier(a, 80000, t));
    g_pair pf = g_fourier_pair(a, 40000, t, true);
    CHECK(pf.lo == g_fourier(a, 40000, t, true));
    CHECK(pf.hi == g_fourier(a, 80000, t, true));
    CHECK(g_fourier(a, 0, t) == 0.0);
    CHECK_THROWS_AS(g_fourier(a, t.limit + 1, t), domain_error);
}

TEST_CASE("direct and fourier evaluations agree on the golden ratio") {
    const divisor_table& t = shared_table();
    double a = 0.61803398874989479;
    double d = g_direct(a, 100000);
    double f = g_fourier(a, 1000000, t);
    CHECK(std::fabs(d - f) < 0.01);
}

TEST_CASE("fourier energy matches the series variance target") {
    // sum of squared fourier coefficients: (1/2) sum tau(m)^2/(pi m)^2 should
    // capture at least 99.95% of 5 pi^2/144 by M = 10^6
    const divisor_table& t = shared_table();
    const double pi = 3.14159265358979323846;
    neumaier_sum acc;
    for (std::uint64_t m = 1; m <= 1000000; ++m) {
        double c = static_cast<double>(t[m]) / (pi * static_cast<double>(m));
        acc.add(0.5 * c * c);
    }
    double target = 5.0 * pi * pi / 144.0;
    CHECK(acc.value() > 0.9995 * target);
    CHECK(acc.value() < target);
}

TEST_CASE("g_eval fourier is exactly zero at one half") {
    // the direct series diverges at alpha = 1/2 (every even index contributes
    // 1/l), so only the fourier path is meaningful there and it vanishes
    // term by term
    const divisor_table& t = shared_table();
    CHECK(g_fourier(0.5, 100000, t) == 0.0);
    g_evaluator cfg;
    cfg.method = g_method::fourier;
    cfg.M = 50000;
    cfg.table = &t;
    g_estimate e = g_eval(0.5, cfg);
    CHECK(e.value == 0.0);
    CHECK(e.spread == 0.0);
    CHECK(!e.flagged);
}

TEST_CASE("g_eval cross-checked combines both method pairs") {
    const divisor_table& t = shared_table();
    g_evaluator cfg;
    cfg.method = g_method::cross_checked;
    cfg.N = 10000;
    cfg.M = 100000;
    cfg.table = &t;
    xoshiro256ss rng(5);
    int tight = 0;
    const int trials = 100;
    for (int i = 0; i < trials; ++i) {
        double alpha = rng.uniform01_open();
        g_estimate e = g_eval(alpha, cfg);
        g_pair d = g_direct_pair(alpha, cfg.N);
        g_pair f = g_fourier_pair(alpha, cfg.M, t);
        double mx = std::max(std::max(d.lo, d.hi), std::max(f.lo, f.hi));
        double mn = std::min(std::min(d.lo, d.hi), std::min(f.lo, f.hi));
        CHECK(e.spread == mx - mn);
        CHECK(e.value == (d.lo + d.hi + f.lo + f.hi) / 4.0);
        CHECK(e.flagged == (e.spread > cfg.tolerance));
        if (e.spread < 0.1) ++tight;
    }
    CHECK(tight >= 95);
}

TEST_CASE("g_eval validates its configuration") {
    g_evaluator cfg;
    cfg.method = g_method::fourier;
    cfg.table = nullptr;
    CHECK_THROWS_AS(g_eval(0.3, cfg), domain_error);
    g_evaluator tiny;
    tiny.method = g_method::direct;
    tiny.N = 1;
    CHECK_THROWS_AS(g_eval(0.3, tiny), domain_error);
}

TEST_CASE("g_decompose splits with an exact three-part identity") {
    g_evaluator cfg;
    cfg.method = g_method::direct;
    cfg.N = 10000;
    g_decomposition dec = g_decompose(0.001, 2, 0.05, cfg);
    CHECK(dec.L1 == 36);  // floor(e^{2k(1-2 delta)}) = floor(e^{3.6})
    CHECK(dec.L2 == 81);  // floor(e^{2k(1+2 delta)}) = floor(e^{4.4})
    CHECK(dec.g1 == doctest::Approx(4.102559196794639).epsilon(1e-12));
    CHECK((dec.est.value - dec.g1 - dec.g2) - dec.g3 == 0.0);
    CHECK(dec.g2 == g_direct_slice(0.001, dec.L1, dec.L2));
    CHECK_THROWS_AS(g_decompose(0.3, 12, 0.1, cfg), domain_error);   // cap blown
    CHECK_THROWS_AS(g_decompose(0.3, 0, 0.05, cfg), domain_error);   // k >= 1
    CHECK_THROWS_AS(g_decompose(0.3, 2, 0.0, cfg), domain_error);    // delta > 0
    CHECK_THROWS_AS(g_decompose(0.3, 2, 0.125, cfg), domain_error);  // delta < 1/8
}

TEST_CASE("z_tau_exact matches hand sums at quarter phase") {
    const divisor_table& t = shared_table();
    // tau(1) sin(pi/2) + tau(2) sin(pi) + tau(3) sin(3pi/2) = 1 + 0 - 2
    CHECK(z_tau_exact(3, 0.25, t) == -1.0);
    CHECK(z_tau_exact(4, 0.25, t) == -1.0);  // tau(4) sin(2pi) = 0
    CHECK(z_tau_exact(1, 0.25, t) == 1.0);
    CHECK_THROWS_AS(z_tau_exact(t.limit + 1ull, 0.25, t), domain_error);
}
