#pragma once

#include "cotlab/fraction.hpp"
#include "cotlab/parallel.hpp"

#include <vector>

namespace cotlab {

// c0(r/b) = -sum_{m=1}^{b-1} (m/b) cot(pi m r / b), evaluated exactly as the
// finite sum with compensated accumulation. The residue m*r mod b is carried
// incrementally (one add + conditional subtract per step), so no product ever
// overflows and the same residue sequence appears for r and b-r mirrored,
// which makes c0((b-r)/b) = -c0(r/b) hold bitwise.
double c0(const reduced_fraction& f);

struct scaled_c0 {
    reduced_fraction f;
    double value;   // c0(r/b)
    double scaled;  // c0(r/b)/b
};

// (r/b, c0(r/b), c0(r/b)/b) for every residue in coprime_window(w), ascending
// r; per-r evaluation is pure and parallelized, output order deterministic
std::vector<scaled_c0> c0_window_scaled(const window& w,
                                        const parallel_map& pm = parallel_map(1));

} // namespace cotlab
