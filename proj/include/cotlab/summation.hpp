#pragma once

#include <cmath>
#include <cstddef>

namespace cotlab {

// Neumaier's improved Kahan accumulator: exact for the running compensation
// even when the new term is larger than the partial sum. Deterministic for a
// fixed addition order, which the whole lab relies on.
class neumaier_sum {
public:
    void add(double x) {
        double t = s_ + x;
        if (std::fabs(s_) >= std::fabs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }

    double value() const { return s_ + c_; }

    void reset() { s_ = 0.0; c_ = 0.0; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

template <typename It>
double compensated_sum(It first, It last) {
    neumaier_sum acc;
    for (; first != last; ++first) acc.add(*first);
    return acc.value();
}

} // namespace cotlab
