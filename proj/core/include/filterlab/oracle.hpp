#pragma once

#include <cstdint>
#include <vector>

namespace filterlab::oracle {

// Brute-force definitions over small universes. Nothing here calls the main
// algorithms; tests compare the two.

/// One period [0, N) of a periodic bounded-block instance: the pattern is
/// repeated with period N, so "finite" means "empty within one period".
struct PeriodicInstance {
    std::uint64_t n = 0;                            // N <= 64
    std::vector<std::vector<std::uint64_t>> blocks; // disjoint subsets of [0, N)
    std::vector<std::vector<bool>> generators;      // each of length N
};

/// Blocks nonempty and every nonempty subfamily of generators meets every block.
bool valid_instance(const PeriodicInstance& inst);
/// Candidate is nonempty, inside the union of the blocks and inside every generator.
bool is_pseudointersection(const PeriodicInstance& inst, const std::vector<bool>& candidate);
/// Every candidate pattern that passes is_pseudointersection; requires N <= 16.
std::vector<std::vector<bool>> pseudointersections(const PeriodicInstance& inst);

/// Number of subsets of the disjoint union of blocks of the given sizes that
/// meet every block, out of 2^(sum of sizes). Sum must be at most 24.
struct Fraction {
    std::uint64_t count = 0;
    std::uint64_t exponent = 0;
};
Fraction measure(const std::vector<std::uint64_t>& sizes);

/// Direct scan of the C_n condition. values[k] = f(x_k) for k < values.size(),
/// `tail` for later k; blocks are consecutive with the given sizes, and every
/// index past the listed blocks lies in blocks of the tail.
bool cn(const std::vector<bool>& values, bool tail, bool at_infinity, std::uint64_t n,
        const std::vector<std::uint64_t>& block_sizes);

} // namespace filterlab::oracle
