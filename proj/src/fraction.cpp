#include "cotlab/fraction.hpp"

#include "cotlab/dyadic.hpp"
#include "cotlab/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cotlab {

reduced_fraction make_reduced_fraction(std::int64_t r, std::int64_t b) {
    if (b == 0) throw domain_error("make_reduced_fraction: b = 0");
    if (b < 0 || r < 0) throw domain_error("make_reduced_fraction: negative input");
    if (r == 0 || r >= b)
        throw domain_error("make_reduced_fraction: need 0 < r < b, got r=" +
                           std::to_string(r) + " b=" + std::to_string(b));
    std::int64_t g = std::gcd(r, b);
    return reduced_fraction{r / g, b / g};
}

window make_window(std::int64_t b, double a0, double a1) {
    if (b < 1) throw domain_error("make_window: b must be >= 1");
    if (!(a0 >= 0.0) || !(a1 <= 1.0) || !(a0 < a1))
        throw domain_error("make_window: need 0 <= a0 < a1 <= 1");
    return window{b, a0, a1};
}

std::uint64_t euler_phi(std::uint64_t b) {
    if (b == 0) throw domain_error("euler_phi: b = 0");
    std::uint64_t result = b;
    std::uint64_t n = b;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

// smallest r with r >= a*b, decided exactly: for dyadic a = num/2^e the
// comparison r*2^e >= num*b is integral (128-bit), so integral endpoints are
// included without floating-point edge surprises
std::int64_t ceil_scaled(double a, std::int64_t b) {
    if (a <= 0.0) return 0;
    dyadic_frac d = to_dyadic(a);
    if (d.fast) {
        unsigned __int128 prod = static_cast<unsigned __int128>(d.num) *
                                 static_cast<unsigned __int128>(b);
        unsigned __int128 denom = static_cast<unsigned __int128>(1) << d.e;
        return static_cast<std::int64_t>((prod + denom - 1) / denom);
    }
    return static_cast<std::int64_t>(std::ceil(a * static_cast<double>(b)));
}

std::int64_t floor_scaled(double a, std::int64_t b) {
    if (a >= 1.0) return b;
    dyadic_frac d = to_dyadic(a);
    if (d.fast) {
        unsigned __int128 prod = static_cast<unsigned __int128>(d.num) *
                                 static_cast<unsigned __int128>(b);
        return static_cast<std::int64_t>(prod >> d.e);
    }
    return static_cast<std::int64_t>(std::floor(a * static_cast<double>(b)));
}

} // namespace

std::vector<reduced_fraction> coprime_window(const window& w) {
    if (w.b < 1) throw domain_error("coprime_window: b must be >= 1");
    if (!(w.a0 >= 0.0) || !(w.a1 <= 1.0) || !(w.a0 < w.a1))
        throw domain_error("coprime_window: need 0 <= a0 < a1 <= 1");
    std::vector<reduced_fraction> out;
    std::int64_t lo = ceil_scaled(w.a0, w.b);
    std::int64_t hi = floor_scaled(w.a1, w.b);
    if (lo < 1) lo = 1;
    if (hi > w.b - 1) hi = w.b - 1;  // r = b is never coprime for b >= 2
    for (std::int64_t r = lo; r <= hi; ++r) {
        if (std::gcd(r, w.b) == 1) out.push_back(reduced_fraction{r, w.b});
    }
    return out;
}

} // namespace cotlab
