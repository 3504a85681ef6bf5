#include "filterlab/oracle.hpp"

#include "filterlab/error.hpp"

namespace filterlab::oracle {

bool valid_instance(const PeriodicInstance& inst)
{
    for (const auto& b : inst.blocks)
        if (b.empty())
            return false;
    const std::size_t g = inst.generators.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g); ++mask)
        for (const auto& b : inst.blocks) {
            bool met = false;
            for (const std::uint64_t x : b) {
                bool all = true;
                for (std::size_t i = 0; i < g; ++i)
                    if ((mask >> i) & 1)
                        all = all && inst.generators[i][x];
                met = met || all;
            }
            if (!met)
                return false;
        }
    return true;
}

bool is_pseudointersection(const PeriodicInstance& inst, const std::vector<bool>& candidate)
{
    std::vector<bool> in_blocks(inst.n, false);
    for (const auto& b : inst.blocks)
        for (const std::uint64_t x : b)
            in_blocks[x] = true;
    bool any = false;
    for (std::uint64_t x = 0; x < inst.n; ++x) {
        if (!candidate[x])
            continue;
        any = true;
        if (!in_blocks[x])
            return false;
        for (const auto& gen : inst.generators)
            if (!gen[x])
                return false;
    }
    return any;
}

std::vector<std::vector<bool>> pseudointersections(const PeriodicInstance& inst)
{
    if (inst.n > 16)
        throw PreconditionError("full enumeration needs N <= 16");
    std::vector<std::vector<bool>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n); ++mask) {
        std::vector<bool> c(inst.n);
        for (std::uint64_t x = 0; x < inst.n; ++x)
            c[x] = (mask >> x) & 1;
        if (is_pseudointersection(inst, c))
            out.push_back(std::move(c));
    }
    return out;
}

Fraction measure(const std::vector<std::uint64_t>& sizes)
{
    std::uint64_t total = 0;
    for (const std::uint64_t s : sizes)
        total += s;
    if (total > 24)
        throw PreconditionError("oracle measure needs at most 24 points");
    Fraction f;
    f.exponent = total;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
        std::uint64_t at = 0;
        bool all = true;
        for (const std::uint64_t s : sizes) {
            const std::uint64_t part = (mask >> at) & ((std::uint64_t{1} << s) - 1);
            all = all && part != 0;
            at += s;
        }
        f.count += all ? 1 : 0;
    }
    return f;
}

bool cn(const std::vector<bool>& values, bool tail, bool at_infinity, std::uint64_t n,
        const std::vector<std::uint64_t>& block_sizes)
{
    auto value = [&](std::uint64_t k) { return k < values.size() ? static_cast<bool>(values[k]) : tail; };
    std::uint64_t start = 0;
    for (std::uint64_t m = 0; m < block_sizes.size(); ++m) {
        bool agree = false;
        for (std::uint64_t k = start; k < start + block_sizes[m]; ++k)
            agree = agree || value(k) == at_infinity;
        if (m >= n && !agree)
            return false;
        start += block_sizes[m];
    }
    // Infinitely many later blocks lie entirely in the tail.
    return tail == at_infinity;
}

} // namespace filterlab::oracle
