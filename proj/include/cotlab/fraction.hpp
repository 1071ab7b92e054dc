#pragma once

#include <cstdint>
#include <vector>

namespace cotlab {

// r/b with gcd(r,b) = 1, 0 < r < b, b >= 2
struct reduced_fraction {
    std::int64_t r = 0;
    std::int64_t b = 1;
};

// validates and reduces by gcd; throws domain_error on b = 0, r <= 0, r >= b
reduced_fraction make_reduced_fraction(std::int64_t r, std::int64_t b);

// residue window [a0*b, a1*b] over which the lab averages. The classical
// setting takes 1/2 < a0 < a1 < 1; the lab relaxes to 0 <= a0 < a1 <= 1 so
// full-range and half-range experiments share one type.
struct window {
    std::int64_t b = 2;
    double a0 = 0.5;
    double a1 = 1.0;
};

// throws domain_error unless b >= 1 and 0 <= a0 < a1 <= 1
window make_window(std::int64_t b, double a0, double a1);

std::uint64_t euler_phi(std::uint64_t b);  // trial factorization; b = 0 -> domain_error

// all r with gcd(r,b) = 1 and a0*b <= r <= a1*b, ascending; the endpoint
// comparisons are exact (dyadic scaling of a0, a1), so integral endpoints are
// included deterministically
std::vector<reduced_fraction> coprime_window(const window& w);

} // namespace cotlab
