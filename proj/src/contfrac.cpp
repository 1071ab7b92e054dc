#include "cotlab/contfrac.hpp"

#include "cotlab/dyadic.hpp"
#include "cotlab/errors.hpp"
#include "cotlab/rng.hpp"
#include "cotlab/summation.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace cotlab {

namespace {

constexpr std::int64_t qbound_limit = static_cast<std::int64_t>(1) << 62;

void check_qbound(std::int64_t qBound) {
    if (qBound < 1 || qBound > qbound_limit)
        throw domain_error("cf_expand: qBound must lie in [1, 2^62]");
}

} // namespace

// ---------------------------------------------------------------- prec_real

struct prec_real::impl {
    mpfr_t lo, hi;
    int prec;

    explicit impl(int p) : prec(std::clamp(p, 8, 1 << 20)) {
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        mpfr_set_zero(lo, 1);
        mpfr_set_zero(hi, 1);
    }
    impl(const impl& o) : prec(o.prec) {
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        mpfr_set(lo, o.lo, MPFR_RNDD);
        mpfr_set(hi, o.hi, MPFR_RNDU);
    }
    ~impl() {
        mpfr_clear(lo);
        mpfr_clear(hi);
    }
};

prec_real::prec_real() = default;
prec_real::~prec_real() = default;
prec_real::prec_real(prec_real&&) noexcept = default;
prec_real& prec_real::operator=(prec_real&&) noexcept = default;

prec_real::prec_real(const prec_real& o)
    : impl_(o.impl_ ? std::make_unique<impl>(*o.impl_) : nullptr) {}

prec_real& prec_real::operator=(const prec_real& o) {
    if (this != &o) impl_ = o.impl_ ? std::make_unique<impl>(*o.impl_) : nullptr;
    return *this;
}

int prec_real::precision() const { return impl_ ? impl_->prec : 0; }

prec_real prec_real::from_fraction(std::int64_t num, std::int64_t den, int precBits) {
    if (den == 0) throw domain_error("prec_real: zero denominator");
    prec_real x;
    x.impl_ = std::make_unique<impl>(precBits);
    mpfr_set_si(x.impl_->lo, num, MPFR_RNDD);
    mpfr_div_si(x.impl_->lo, x.impl_->lo, den, MPFR_RNDD);
    mpfr_set_si(x.impl_->hi, num, MPFR_RNDU);
    mpfr_div_si(x.impl_->hi, x.impl_->hi, den, MPFR_RNDU);
    if (mpfr_cmp(x.impl_->lo, x.impl_->hi) > 0) mpfr_swap(x.impl_->lo, x.impl_->hi);
    return x;
}

prec_real prec_real::from_double(double v, int precBits) {
    prec_real x;
    x.impl_ = std::make_unique<impl>(precBits);
    mpfr_set_d(x.impl_->lo, v, MPFR_RNDD);
    mpfr_set_d(x.impl_->hi, v, MPFR_RNDU);
    return x;
}

prec_real prec_real::from_decimal(const std::string& s, int precBits) {
    prec_real x;
    x.impl_ = std::make_unique<impl>(precBits);
    if (mpfr_set_str(x.impl_->lo, s.c_str(), 10, MPFR_RNDD) != 0 ||
        mpfr_set_str(x.impl_->hi, s.c_str(), 10, MPFR_RNDU) != 0)
        throw domain_error("prec_real: cannot parse decimal literal '" + s + "'");
    return x;
}

prec_real prec_real::surd(std::int64_t D, std::int64_t P, std::int64_t Q, int precBits) {
    if (D < 0) throw domain_error("surd: D >= 0 required");
    if (Q == 0) throw domain_error("surd: Q != 0 required");
    prec_real x;
    x.impl_ = std::make_unique<impl>(precBits);
    mpfr_t nlo, nhi;
    mpfr_init2(nlo, x.impl_->prec + 8);
    mpfr_init2(nhi, x.impl_->prec + 8);
    mpfr_set_si(nlo, D, MPFR_RNDD);
    mpfr_sqrt(nlo, nlo, MPFR_RNDD);
    mpfr_add_si(nlo, nlo, P, MPFR_RNDD);
    mpfr_set_si(nhi, D, MPFR_RNDU);
    mpfr_sqrt(nhi, nhi, MPFR_RNDU);
    mpfr_add_si(nhi, nhi, P, MPFR_RNDU);
    if (Q > 0) {
        mpfr_div_si(x.impl_->lo, nlo, Q, MPFR_RNDD);
        mpfr_div_si(x.impl_->hi, nhi, Q, MPFR_RNDU);
    } else {
        mpfr_div_si(x.impl_->lo, nhi, Q, MPFR_RNDD);
        mpfr_div_si(x.impl_->hi, nlo, Q, MPFR_RNDU);
    }
    mpfr_clear(nlo);
    mpfr_clear(nhi);
    return x;
}

prec_real prec_real::golden(int precBits) { return surd(5, -1, 2, precBits); }

// ------------------------------------------------------------- cf_expansion

std::int64_t cf_expansion::a_at(int r) const {
    if (r < 1 || r > depth())
        throw domain_error("cf_expansion: a_" + std::to_string(r) + " out of range");
    return a[static_cast<std::size_t>(r) - 1];
}

std::int64_t cf_expansion::p_at(int r) const {
    if (r < -1 || r > depth())
        throw domain_error("cf_expansion: p_" + std::to_string(r) + " out of range");
    return p[static_cast<std::size_t>(r) + 1];
}

std::int64_t cf_expansion::q_at(int r) const {
    if (r < -1 || r > depth())
        throw domain_error("cf_expansion: q_" + std::to_string(r) + " out of range");
    return q[static_cast<std::size_t>(r) + 1];
}

cf_expansion cf_expand(std::int64_t num, std::int64_t den, int maxDepth,
                       std::int64_t qBound) {
    check_qbound(qBound);
    if (maxDepth < 0) throw domain_error("cf_expand: maxDepth >= 0 required");
    if (den <= 0 || num <= 0 || num >= den)
        throw domain_error("cf_expand: rational must lie in (0,1)");
    cf_expansion cf;
    cf.p = {1, 0};
    cf.q = {0, 1};
    cf.reason = cf_expansion::stop_reason::depth;
    std::int64_t u = den, v = num;
    for (int step = 0; step < maxDepth && v != 0; ++step) {
        std::int64_t a = u / v;
        std::int64_t rem = u % v;
        // convergents stay <= den < 2^63, so plain int64 arithmetic is safe
        std::int64_t pn = a * cf.p[cf.p.size() - 1] + cf.p[cf.p.size() - 2];
        std::int64_t qn = a * cf.q[cf.q.size() - 1] + cf.q[cf.q.size() - 2];
        cf.a.push_back(a);
        cf.p.push_back(pn);
        cf.q.push_back(qn);
        u = v;
        v = rem;
        if (v == 0) {
            cf.exact_terminated = true;
            cf.reason = cf_expansion::stop_reason::exact;
            break;
        }
        if (qn > qBound) {
            cf.reason = cf_expansion::stop_reason::qbound;
            break;
        }
    }
    return cf;
}

namespace {

// interval Gauss iteration on working copies [lo, hi]; when captureAt >= 0
// the interval describing T^captureAt(x) is copied out before that step's
// quotient is extracted
cf_expansion expand_interval(mpfr_t lo, mpfr_t hi, int maxDepth, std::int64_t qBound,
                             int captureAt, mpfr_t cap_lo, mpfr_t cap_hi,
                             bool* captured) {
    cf_expansion cf;
    cf.p = {1, 0};
    cf.q = {0, 1};
    cf.reason = cf_expansion::stop_reason::depth;
    if (captured) *captured = false;
    if (mpfr_sgn(lo) <= 0 || mpfr_cmp_ui(hi, 1) >= 0)
        throw domain_error("cf_expand: x must lie in (0,1)");
    mpfr_prec_t prec = mpfr_get_prec(lo);
    mpfr_t ilo, ihi, flo, fhi;
    mpfr_init2(ilo, prec);
    mpfr_init2(ihi, prec);
    mpfr_init2(flo, prec);
    mpfr_init2(fhi, prec);
    auto cleanup = [&]() {
        mpfr_clear(ilo);
        mpfr_clear(ihi);
        mpfr_clear(flo);
        mpfr_clear(fhi);
    };
    try {
        for (int step = 0; step < maxDepth; ++step) {
            if (captured && step == captureAt) {
                mpfr_set(cap_lo, lo, MPFR_RNDD);
                mpfr_set(cap_hi, hi, MPFR_RNDU);
                *captured = true;
            }
            if (mpfr_zero_p(lo) && mpfr_zero_p(hi)) {
                cf.exact_terminated = true;
                cf.reason = cf_expansion::stop_reason::exact;
                break;
            }
            if (mpfr_sgn(lo) <= 0)
                throw precision_error(
                    "cf_expand: remainder at depth " + std::to_string(step + 1) +
                    " is not separated from zero at working precision " +
                    std::to_string(static_cast<long>(prec)) +
                    "; raise the precision or use the exact rational expansion");
            if (mpfr_cmp_ui(hi, 1) >= 0)
                throw precision_error("cf_expand: remainder interval escaped (0,1) at depth " +
                                      std::to_string(step + 1));
            mpfr_ui_div(ilo, 1, hi, MPFR_RNDD);
            mpfr_ui_div(ihi, 1, lo, MPFR_RNDU);
            mpfr_floor(flo, ilo);
            mpfr_floor(fhi, ihi);
            if (!mpfr_equal_p(flo, fhi))
                throw precision_error(
                    "cf_expand: partial quotient a_" + std::to_string(step + 1) +
                    " undecided at working precision " +
                    std::to_string(static_cast<long>(prec)) + " bits");
            if (mpfr_cmp_si(flo, qbound_limit) > 0) {
                cf.reason = cf_expansion::stop_reason::qbound;
                break;
            }
            std::int64_t a = mpfr_get_si(flo, MPFR_RNDZ);
            if (a < 1)
                throw precision_error("cf_expand: interval slack produced a nonpositive quotient");
            using i128 = __int128;
            i128 pn = static_cast<i128>(a) * cf.p[cf.p.size() - 1] + cf.p[cf.p.size() - 2];
            i128 qn = static_cast<i128>(a) * cf.q[cf.q.size() - 1] + cf.q[cf.q.size() - 2];
            if (pn > std::numeric_limits<std::int64_t>::max() ||
                qn > std::numeric_limits<std::int64_t>::max()) {
                cf.reason = cf_expansion::stop_reason::qbound;
                break;
            }
            cf.a.push_back(a);
            cf.p.push_back(static_cast<std::int64_t>(pn));
            cf.q.push_back(static_cast<std::int64_t>(qn));
            if (static_cast<std::int64_t>(qn) > qBound) {
                cf.reason = cf_expansion::stop_reason::qbound;
                break;
            }
            mpfr_sub_si(lo, ilo, a, MPFR_RNDD);
            mpfr_sub_si(hi, ihi, a, MPFR_RNDU);
            if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);  // true remainder is >= 0
        }
    } catch (...) {
        cleanup();
        throw;
    }
    cleanup();
    return cf;
}

int working_precision(std::int64_t qBound, int precBitsOverride) {
    if (precBitsOverride > 0) return precBitsOverride;
    double bits = 2.0 * std::log2(static_cast<double>(qBound)) + 64.0;
    return static_cast<int>(bits) + 1;
}

} // namespace

cf_expansion cf_expand(const prec_real& x, int maxDepth, std::int64_t qBound,
                       int precBitsOverride) {
    check_qbound(qBound);
    if (maxDepth < 0) throw domain_error("cf_expand: maxDepth >= 0 required");
    if (x.precision() == 0) throw domain_error("cf_expand: uninitialized prec_real");
    int prec = working_precision(qBound, precBitsOverride);
    mpfr_t lo, hi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set(lo, x.internals().lo, MPFR_RNDD);
    mpfr_set(hi, x.internals().hi, MPFR_RNDU);
    try {
        cf_expansion cf = expand_interval(lo, hi, maxDepth, qBound, -1, nullptr, nullptr, nullptr);
        mpfr_clear(lo);
        mpfr_clear(hi);
        return cf;
    } catch (...) {
        mpfr_clear(lo);
        mpfr_clear(hi);
        throw;
    }
}

// ------------------------------------------------------------ gauss map etc

double gauss_map(double x) {
    if (!(x > 0.0) || !(x < 1.0))
        throw domain_error("gauss_map: x must lie in (0,1)");
    double inv = 1.0 / x;
    return inv - std::floor(inv);
}

double gauss_measure(double lo, double hi) {
    if (!(lo >= 0.0) || !(hi <= 1.0) || !(lo <= hi))
        throw domain_error("gauss_measure: need 0 <= lo <= hi <= 1");
    return (std::log1p(hi) - std::log1p(lo)) / std::log(2.0);
}

namespace {

// compare the independently expanded shift against the tail of the original
// expansion; when either side terminated exactly, the (truncated) tails must
// agree in full length
bool tails_match(const std::vector<std::int64_t>& tail, bool tail_exact,
                 const std::vector<std::int64_t>& shifted, bool shifted_exact,
                 int depth) {
    std::size_t want = static_cast<std::size_t>(depth);
    std::size_t na = std::min(tail.size(), want);
    std::size_t nb = std::min(shifted.size(), want);
    std::size_t m = std::min(na, nb);
    for (std::size_t i = 0; i < m; ++i)
        if (tail[i] != shifted[i]) return false;
    if (na != nb && (tail_exact || shifted_exact)) return false;
    return true;
}

} // namespace

bool shift_check(std::int64_t num, std::int64_t den, int r, int depth) {
    if (r < 0 || depth < 1) throw domain_error("shift_check: r >= 0 and depth >= 1 required");
    cf_expansion A = cf_expand(num, den, r + depth, qbound_limit);
    std::vector<std::int64_t> tail;
    for (int j = r; j < A.depth(); ++j) tail.push_back(A.a[static_cast<std::size_t>(j)]);
    // r exact Gauss-map steps on the rational: (n, d) -> (d mod n, n)
    std::int64_t n = num, d = den;
    for (int j = 0; j < r && n != 0; ++j) {
        std::int64_t nn = d % n;
        d = n;
        n = nn;
    }
    std::vector<std::int64_t> shifted;
    bool shifted_exact = true;
    if (n != 0) {
        cf_expansion B = cf_expand(n, d, depth, qbound_limit);
        shifted = B.a;
        shifted_exact = B.exact_terminated;
    }
    return tails_match(tail, A.exact_terminated, shifted, shifted_exact, depth);
}

bool shift_check(const prec_real& x, int r, int depth) {
    if (r < 0 || depth < 1) throw domain_error("shift_check: r >= 0 and depth >= 1 required");
    if (x.precision() == 0) throw domain_error("shift_check: uninitialized prec_real");
    int prec = std::max(working_precision(qbound_limit, 0), x.precision());
    mpfr_t lo, hi, clo, chi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_init2(clo, prec);
    mpfr_init2(chi, prec);
    mpfr_set(lo, x.internals().lo, MPFR_RNDD);
    mpfr_set(hi, x.internals().hi, MPFR_RNDU);
    bool captured = false;
    auto cleanup = [&]() {
        mpfr_clear(lo);
        mpfr_clear(hi);
        mpfr_clear(clo);
        mpfr_clear(chi);
    };
    try {
        cf_expansion A =
            expand_interval(lo, hi, r + depth, qbound_limit, r, clo, chi, &captured);
        std::vector<std::int64_t> tail;
        for (int j = r; j < A.depth(); ++j) tail.push_back(A.a[static_cast<std::size_t>(j)]);
        std::vector<std::int64_t> shifted;
        bool shifted_exact = true;
        if (captured && !(mpfr_zero_p(clo) && mpfr_zero_p(chi))) {
            cf_expansion B =
                expand_interval(clo, chi, depth, qbound_limit, -1, nullptr, nullptr, nullptr);
            shifted = B.a;
            shifted_exact = B.exact_terminated;
        }
        bool ok = tails_match(tail, A.exact_terminated, shifted, shifted_exact, depth);
        cleanup();
        return ok;
    } catch (...) {
        cleanup();
        throw;
    }
}

// ------------------------------------------------------------- c(alpha, r)

double c_alpha_r(const cf_expansion& cf, int r) {
    if (r < 0) throw domain_error("c_alpha_r: r >= 0 required");
    int needed = r + 1;
    int R = cf.depth();
    if (needed > R && !cf.exact_terminated)
        throw domain_error("c_alpha_r: needs expansion depth " + std::to_string(needed) +
                           " but only " + std::to_string(R) +
                           " quotients are available (expansion was cut short)");
    int top = std::min(needed, R);
    neumaier_sum acc;
    for (int j = 0; j < top; ++j)
        acc.add(std::log(static_cast<double>(cf.q_at(j + 1))) /
                static_cast<double>(cf.q_at(j)));
    return acc.value();
}

double c_alpha_inf(const cf_expansion& cf, double A, std::int64_t qBound, double eps) {
    if (!(A > 1.0)) throw domain_error("c_alpha_inf: growth base must exceed 1");
    if (!(eps > 0.0)) throw domain_error("c_alpha_inf: eps > 0 required");
    check_qbound(qBound);
    // tail beyond r: sum log(q_{j+1})/q_j <= log(qBound) * A^-r / (A - 1)
    double need = std::log(static_cast<double>(qBound)) / (eps * (A - 1.0));
    int r_policy = std::max(1, static_cast<int>(std::ceil(std::log(need) / std::log(A))));
    if (cf.exact_terminated) return c_alpha_r(cf, r_policy);
    int r_eff = std::min(r_policy, cf.depth() - 1);
    if (r_eff < 0) throw domain_error("c_alpha_inf: expansion has no quotients");
    return c_alpha_r(cf, r_eff);
}

// -------------------------------------------------------------- w sequence

w_sequence::w_sequence() : w_sequence(std::sqrt(2.0)) {}

w_sequence::w_sequence(double A) : growthBase(A) {
    if (!(A > 1.0)) throw domain_error("w_sequence: growth base must exceed 1");
    cSmall = (1.0 - 1.0 / std::sqrt(A)) / 4.0;
}

double w_sequence::w(int r) const {
    if (r < 0) throw domain_error("w_sequence: r >= 0 required");
    // 1/2 + cSmall (1 - A^{-(r+1)/2})/(1 - A^{-1/2}) with cSmall folded in
    double t = std::pow(growthBase, -0.5 * (static_cast<double>(r) + 1.0));
    return 0.5 + 0.25 * (1.0 - t);
}

// ---------------------------------------------------------- E(z,r) machinery

namespace {

bool e_member(const cf_expansion& cf, double z, int r, const w_sequence& ws) {
    if (r == 0) return c_alpha_r(cf, 1) >= 0.5 * z;
    return c_alpha_r(cf, r - 1) < ws.w(r - 1) * z && c_alpha_r(cf, r) >= ws.w(r) * z;
}

// 53-bit dyadic samples terminate exactly well before this depth (the longest
// expansion of k/2^53 has ~78 quotients)
constexpr int mc_cf_depth = 96;
constexpr std::uint64_t mc_chunks = 256;

cf_expansion expand_unit_sample(double alpha) {
    dyadic_frac d = to_dyadic(alpha);
    return cf_expand(static_cast<std::int64_t>(d.num),
                     static_cast<std::int64_t>(1) << d.e, mc_cf_depth, qbound_limit);
}

template <typename Member>
mc_estimate binomial_mc(std::uint64_t nSamples, std::uint64_t seed,
                        const parallel_map& pm, Member member) {
    std::vector<std::uint64_t> hits(mc_chunks, 0);
    pm.for_tasks(mc_chunks, [&](std::size_t c) {
        std::uint64_t quota = nSamples / mc_chunks + (c < nSamples % mc_chunks ? 1 : 0);
        xoshiro256ss rng(derive_seed(seed, c));
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < quota; ++i)
            if (member(rng.uniform01_open())) ++h;
        hits[c] = h;
    });
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;
    double p = static_cast<double>(total) / static_cast<double>(nSamples);
    mc_estimate e;
    e.estimate = p;
    e.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(nSamples));
    e.n = nSamples;
    e.seed = seed;
    return e;
}

} // namespace

std::optional<int> classify_E(const cf_expansion& cf, double z, const w_sequence& ws,
                              int maxR) {
    if (!(z > 0.0)) throw domain_error("classify_E: z > 0 required");
    if (maxR < 0) throw domain_error("classify_E: maxR >= 0 required");
    for (int r = 0; r <= maxR; ++r)
        if (e_member(cf, z, r, ws)) return r;
    return std::nullopt;
}

mc_estimate measure_E_mc(double z, int r, std::uint64_t nSamples, std::uint64_t seed,
                         const w_sequence& ws, const parallel_map& pm) {
    if (!(z > 0.0)) throw domain_error("measure_E_mc: z > 0 required");
    if (r < 0) throw domain_error("measure_E_mc: r >= 0 required");
    if (nSamples < 1000) throw domain_error("measure_E_mc: nSamples >= 10^3 required");
    return binomial_mc(nSamples, seed, pm, [&](double alpha) {
        return e_member(expand_unit_sample(alpha), z, r, ws);
    });
}

mc_estimate measure_E_inf_mc(double z, std::uint64_t nSamples, std::uint64_t seed,
                             const w_sequence& ws, const parallel_map& pm) {
    if (!(z > 0.0)) throw domain_error("measure_E_inf_mc: z > 0 required");
    if (nSamples < 1000) throw domain_error("measure_E_inf_mc: nSamples >= 10^3 required");
    return binomial_mc(nSamples, seed, pm, [&](double alpha) {
        cf_expansion cf = expand_unit_sample(alpha);
        return c_alpha_inf(cf, ws.growthBase, qbound_limit, 1e-6) >= z;
    });
}

double e_measure_bound(double z, int r, const w_sequence& ws) {
    if (!(z > 0.0)) throw domain_error("e_measure_bound: z > 0 required");
    if (r >= 0)
        return std::exp(-0.5 * ws.cSmall * std::pow(ws.growthBase, 0.5 * r) * z);
    if (r != -1) throw domain_error("e_measure_bound: r must be >= 0, or -1 for the sum");
    neumaier_sum acc;
    for (int j = 0; j < 100000; ++j) {
        double term = std::exp(-0.5 * ws.cSmall * std::pow(ws.growthBase, 0.5 * j) * z);
        if (term < 1e-12) break;
        acc.add(term);
    }
    return acc.value();
}

// ------------------------------------------------------------- best approx

best_approx_result best_approx(double theta, std::int64_t Q) {
    if (Q < 1) throw domain_error("best_approx: Q >= 1 required");
    if (!std::isfinite(theta)) throw domain_error("best_approx: theta must be finite");
    double th = theta - std::floor(theta);
    if (th == 0.0) return {1, 0.0};
    dyadic_frac d = to_dyadic(th);
    using u128 = unsigned __int128;
    if (d.num == 0 || d.e > 127) {
        // th < 2^-74 here, so m*th < 2^62 * 2^-74 stays far below 1/2 and the
        // distance m*th is minimized at m = 1
        return {1, th};
    }
    const u128 den = static_cast<u128>(1) << d.e;
    const u128 num = d.num;
    std::vector<std::int64_t> cands{1};
    u128 u = den, v = num;
    u128 q0 = 1, qm1 = 0;
    while (v != 0) {
        u128 quot = u / v;
        if (quot > (static_cast<u128>(1) << 64)) break;  // denominator will overshoot Q
        u128 qn = quot * q0 + qm1;
        if (qn > static_cast<u128>(Q)) break;
        cands.push_back(static_cast<std::int64_t>(qn));
        qm1 = q0;
        q0 = qn;
        u128 rem = u % v;
        u = v;
        v = rem;
    }
    std::int64_t best_q = 0;
    u128 best_dist = 0;
    bool first = true;
    for (std::int64_t m : cands) {
        u128 rm = (static_cast<u128>(m) * num) % den;
        u128 dist = (rm <= den - rm) ? rm : den - rm;
        if (first || dist < best_dist || (dist == best_dist && m < best_q)) {
            best_q = m;
            best_dist = dist;
            first = false;
        }
    }
    double mu = static_cast<double>(best_dist) * std::ldexp(1.0, -d.e);
    return {best_q, mu};
}

double growth_fit(const cf_expansion& cf) {
    if (cf.depth() < 2) throw domain_error("growth_fit: expansion depth >= 2 required");
    double best = std::numeric_limits<double>::infinity();
    for (int r = 2; r <= cf.depth(); ++r) {
        double v = std::pow(static_cast<double>(cf.q_at(r)), 1.0 / static_cast<double>(r));
        if (v < best) best = v;
    }
    return best;
}

mc_estimate gauss_preimage_mc(double t, std::uint64_t nSamples, std::uint64_t seed,
                              const parallel_map& pm) {
    if (!(t > 0.0) || !(t <= 1.0)) throw domain_error("gauss_preimage_mc: t in (0,1] required");
    if (nSamples < 1000) throw domain_error("gauss_preimage_mc: nSamples >= 10^3 required");
    return binomial_mc(nSamples, seed, pm, [&](double u) {
        double x = std::exp2(u) - 1.0;  // inverse CDF of the Gauss measure
        return gauss_map(x) < t;
    });
}

} // namespace cotlab
