#pragma once

#include <cmath>
#include <cstdint>

namespace cotlab {

// B(u) = 1 - 2{u}, the centered fractional part, range (-1, 1]
inline double sawtooth(double u) {
    double f = u - std::floor(u);
    return 1.0 - 2.0 * f;
}

// alpha = num * 2^-e with num odd. Every double the uniform sampler produces
// is k/2^53, so the reduced exponent e is at most 53 and the exact integer
// path below applies; `fast` marks eligibility for the 64-bit residue path
// (e <= 63), but num/e describe the value exactly whenever they are nonzero.
struct dyadic_frac {
    std::uint64_t num = 0;
    int e = 0;
    bool fast = false;
    double value = 0.0;
};

inline dyadic_frac to_dyadic(double alpha) {
    dyadic_frac d;
    d.value = alpha;
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0) return d;
    int ex = 0;
    double m = std::frexp(alpha, &ex);                           // alpha = m * 2^ex
    auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));   // exact, 2^52..2^53-1
    int e = 53 - ex;
    while ((mant & 1ULL) == 0) {
        mant >>= 1;
        --e;
    }
    d.num = mant;
    d.e = e;
    d.fast = (e >= 1 && e <= 63);
    return d;
}

// Sawtooth of l*alpha evaluated from the exact residue (l*num) mod 2^e.
// The numerator 2^e - 2r is formed in integers and rounded exactly once, so
// replacing alpha by 1-alpha (residue r -> 2^e - r) negates the integer and
// hence the double: B(l(1-alpha)) = -B(l*alpha) bitwise. That single rounding
// is what makes the series antisymmetry tests exact rather than approximate.
class dyadic_sawtooth {
public:
    explicit dyadic_sawtooth(const dyadic_frac& d)
        : num_(d.num),
          mask_(d.fast ? ((d.e == 63) ? 0x7FFFFFFFFFFFFFFFULL : ((1ULL << d.e) - 1)) : 0),
          one_(d.fast ? (1ULL << d.e) : 0),
          inv_(d.fast ? std::ldexp(1.0, -d.e) : 0.0),
          alpha_(d.value),
          fast_(d.fast) {}

    double operator()(std::uint64_t l) const {
        if (fast_) {
            std::uint64_t r = (l * num_) & mask_;  // exact since e < 64
            if (r == 0) return 1.0;                // {integer} = 0
            std::uint64_t ud = one_ - (r << 1);    // 2^e - 2r, two's-complement wrap
            return static_cast<double>(static_cast<std::int64_t>(ud)) * inv_;
        }
        return sawtooth(static_cast<double>(l) * alpha_);
    }

    bool exact() const { return fast_; }

private:
    std::uint64_t num_;
    std::uint64_t mask_;
    std::uint64_t one_;
    double inv_;
    double alpha_;
    bool fast_;
};

namespace detail {
inline constexpr double two_pi = 6.283185307179586476925287;
}

// sin(2*pi*r) for r in [0,1), folded onto [0,1/2] so that the reflection
// r -> 1-r is computed through the Sterbenz-exact difference 1-r and lands on
// the identical std::sin argument: sin_two_pi_frac(1-r) = -sin_two_pi_frac(r)
// bitwise, with exact zeros at r = 0 and r = 1/2.
inline double sin_two_pi_frac(double r) {
    if (r == 0.0 || r == 0.5) return 0.0;
    if (r > 0.5) return -std::sin(detail::two_pi * (1.0 - r));
    return std::sin(detail::two_pi * r);
}

inline double cos_two_pi_frac(double r) {
    if (r > 0.5) return std::cos(detail::two_pi * (1.0 - r));
    return std::cos(detail::two_pi * r);
}

// cot(pi*x) for x in (0, 1/2]; callers fold x > 1/2 by sign themselves
inline double cot_pi_half(double x) {
    double t = 3.14159265358979323846 * x;
    return std::cos(t) / std::sin(t);
}

} // namespace cotlab
