#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cotlab {

struct divisor_table {
    std::uint32_t limit = 0;
    std::vector<std::uint32_t> tau;  // tau[m] valid for 1 <= m <= limit; tau[0] unused

    std::uint32_t operator[](std::uint64_t m) const { return tau[m]; }
};

// tau[m] = number of divisors of m for all m <= M, by multiple marking,
// O(M log M); M = 0 -> domain_error
divisor_table divisor_sieve(std::uint32_t M);

// cache file format: little-endian u32 M followed by M little-endian u32
// values tau[1..M]
bool save_divisor_table(const divisor_table& t, const std::string& path);

// nullopt on missing file, size mismatch, or failed sanity spot-checks
// (tau[1] = 1, tau[2] = 2, tau[12] = 6 where in range); the caller rebuilds
std::optional<divisor_table> load_divisor_table(const std::string& path);

} // namespace cotlab
