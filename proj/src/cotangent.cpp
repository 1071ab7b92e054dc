#include "cotlab/cotangent.hpp"

#include "cotlab/dyadic.hpp"
#include "cotlab/errors.hpp"
#include "cotlab/summation.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace cotlab {

namespace {

// shared cot(pi*kk/b) values for kk = 1..b/2; reusing one immutable table
// across the window's residues keeps the per-r evaluation identical bit for
// bit with the table-free path (same argument doubles, same cot calls)
std::vector<double> build_cot_table(std::int64_t b) {
    std::vector<double> tab(static_cast<std::size_t>(b / 2) + 1, 0.0);
    double db = static_cast<double>(b);
    for (std::int64_t kk = 1; 2 * kk <= b; ++kk)
        tab[static_cast<std::size_t>(kk)] =
            cot_pi_half(static_cast<double>(kk) / db);
    return tab;
}

// The residue m*r mod b advances by one modular addition per term, so the
// sum never forms the product m*r. For the mirrored fraction (b-r)/b the
// residue is exactly b - (m*r mod b): same folded index kk, opposite sign,
// so every term (and hence the compensated total) negates bitwise.
double c0_impl(const reduced_fraction& f, const std::vector<double>* table) {
    const std::uint64_t b = static_cast<std::uint64_t>(f.b);
    const std::uint64_t r = static_cast<std::uint64_t>(f.r);
    const double db = static_cast<double>(f.b);
    neumaier_sum acc;
    std::uint64_t mrb = 0;
    for (std::uint64_t m = 1; m < b; ++m) {
        mrb += r;
        if (mrb >= b) mrb -= b;
        std::uint64_t twice = 2 * mrb;
        if (twice == b) continue;  // cot(pi/2) = 0, term vanishes exactly
        std::uint64_t kk = mrb;
        double sgn = 1.0;
        if (twice > b) {
            kk = b - mrb;
            sgn = -1.0;
        }
        double ct = table ? (*table)[static_cast<std::size_t>(kk)]
                          : cot_pi_half(static_cast<double>(kk) / db);
        acc.add(-(static_cast<double>(m) / db) * sgn * ct);
    }
    return acc.value();
}

} // namespace

double c0(const reduced_fraction& f) {
    if (f.b < 2 || f.r <= 0 || f.r >= f.b)
        throw domain_error("c0: invalid reduced fraction");
    return c0_impl(f, nullptr);
}

std::vector<scaled_c0> c0_window_scaled(const window& w, const parallel_map& pm) {
    std::vector<reduced_fraction> rs = coprime_window(w);
    std::vector<scaled_c0> out(rs.size());
    // the table pays off once several residues share a denominator; capped so
    // giant b cannot exhaust memory
    std::unique_ptr<std::vector<double>> table;
    if (rs.size() > 2 && w.b <= 10000000) table = std::make_unique<std::vector<double>>(build_cot_table(w.b));
    const std::vector<double>* tab = table ? table.get() : nullptr;
    const double db = static_cast<double>(w.b);
    pm.for_tasks(rs.size(), [&](std::size_t i) {
        double v = c0_impl(rs[i], tab);
        out[i] = scaled_c0{rs[i], v, v / db};
    });
    return out;
}

} // namespace cotlab
