#pragma once

#include "filterlab/partition.hpp"
#include "filterlab/set_description.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace filterlab {

/// Membership of a set inside one block as a function of the offset j:
/// offsets in [cuts[i], cuts[i+1]) are members iff bits[i]; the last class is
/// unbounded.
struct OffsetPattern {
    std::vector<std::uint64_t> cuts{0};
    std::vector<bool> bits{false};

    static OffsetPattern constant(bool bit);
    /// Offsets below t get `below`, the rest get !below.
    static OffsetPattern threshold(std::uint64_t t, bool below);

    bool at(std::uint64_t j) const;
    /// |{j < size : at(j)}|
    std::uint64_t count_below(std::uint64_t size) const;
    OffsetPattern negated() const;
    static OffsetPattern combine(const OffsetPattern& a, const OffsetPattern& b, bool conjunction);

    friend bool operator==(const OffsetPattern&, const OffsetPattern&) = default;
};

/// Closed form of A relative to a partition xi: for every block m >= from_block,
/// A cap xi^{-1}(m) = { start(m) + j : j < size(m), patterns[m % period].at(j) }.
struct BlockShape {
    std::uint64_t from_block = 0;
    std::uint64_t period = 1;
    std::vector<OffsetPattern> patterns{OffsetPattern::constant(false)};

    const OffsetPattern& at_block(std::uint64_t m) const { return patterns[m % period]; }
    std::uint64_t count(const BlockPartition& xi, std::uint64_t m) const
    {
        return at_block(m).count_below(xi.size(m));
    }
};

/// Eventual periodicity in position space: for x >= start, membership of x
/// depends only on x mod period.
struct PositionPeriod {
    std::uint64_t start = 0;
    std::uint64_t period = 1;
};

inline constexpr std::uint64_t kMaxShapePeriod = std::uint64_t{1} << 16;

std::optional<BlockShape> shape_of(const SetDescription& a, const BlockPartition& xi);
std::optional<PositionPeriod> position_period(const SetDescription& a);

/// First block index whose start is >= x.
std::uint64_t first_block_at_or_after(const BlockPartition& xi, std::uint64_t x);

} // namespace filterlab
