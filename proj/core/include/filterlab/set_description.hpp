#pragma once

#include "filterlab/partition.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace filterlab {

enum class Universe { Omega, OmegaSquared };

/// Which points of a block a BlockRule keeps.
struct Selector {
    enum class Kind { All, None, First, AllButFirst, Removed };

    Kind kind = Kind::All;
    std::uint64_t t = 0;
    std::vector<std::uint64_t> removed; // absolute positions, Removed only

    static Selector all() { return {Kind::All, 0, {}}; }
    static Selector none() { return {Kind::None, 0, {}}; }
    static Selector first(std::uint64_t t);
    static Selector all_but_first(std::uint64_t t);
    static Selector removed_points(std::vector<std::uint64_t> pts);

    /// Whether offset j of a block is kept (Removed is decided by position, not offset).
    bool keeps_offset(std::uint64_t j) const noexcept;

    friend bool operator==(const Selector&, const Selector&) = default;
};

/// max(0, slope * n + offset), clamped to kMaxPosition.
struct Affine {
    std::int64_t slope = 0;
    std::int64_t offset = 0;

    std::uint64_t at(std::uint64_t n) const noexcept;

    friend bool operator==(const Affine&, const Affine&) = default;
};

struct SetNode;

/// A finitely presented subset of omega (or of omega x omega).
///
/// Values are immutable and cheap to copy. Membership is total and decidable
/// for every kind; the closed-form questions (cofiniteness, per-block counts,
/// images) are answered by the shape machinery in shape.hpp and decide.hpp.
class SetDescription {
public:
    enum class Kind { Finite, Cofinite, Interval, Truncated, BlockRule, PairedRows, Lift, And, Or, Not };

    SetDescription(); // the empty set

    static SetDescription finite(std::vector<std::uint64_t> elems);
    static SetDescription cofinite(std::vector<std::uint64_t> drop);
    static SetDescription omega() { return cofinite({}); }
    static SetDescription empty() { return finite({}); }
    /// [lo, hi), or [lo, infinity) when hi is empty.
    static SetDescription interval(std::uint64_t lo, std::optional<std::uint64_t> hi);
    static SetDescription truncated(std::vector<bool> bits, bool tail_full);
    /// Blocks of `partition` filtered by `selector`; when period > 1 only blocks
    /// whose index mod period lies in `residues` contribute.
    static SetDescription block_rule(BlockPartition partition, Selector selector, std::uint64_t period = 1,
                                     std::vector<std::uint64_t> residues = {});
    /// Subset of omega x omega whose row n (n >= from_row) is [lo(n), hi(n)).
    static SetDescription paired_rows(std::uint64_t from_row, Affine lo, std::optional<Affine> hi);
    /// {x : xi(x) in index_set} for the partition xi.
    static SetDescription lift(BlockPartition partition, SetDescription index_set);
    static SetDescription all_of(std::vector<SetDescription> parts);
    static SetDescription any_of(std::vector<SetDescription> parts);
    static SetDescription complement(SetDescription s);

    static SetDescription evens();
    static SetDescription odds();

    Kind kind() const noexcept;
    Universe universe() const noexcept;
    const SetNode& node() const noexcept { return *node_; }

    friend bool operator==(const SetDescription& a, const SetDescription& b);

private:
    explicit SetDescription(std::shared_ptr<const SetNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const SetNode> node_;
};

inline SetDescription operator&(SetDescription a, SetDescription b)
{
    return SetDescription::all_of({std::move(a), std::move(b)});
}
inline SetDescription operator|(SetDescription a, SetDescription b)
{
    return SetDescription::any_of({std::move(a), std::move(b)});
}
inline SetDescription operator~(SetDescription a)
{
    return SetDescription::complement(std::move(a));
}

struct FiniteData {
    std::vector<std::uint64_t> elems; // sorted, unique
    friend bool operator==(const FiniteData&, const FiniteData&) = default;
};
struct CofiniteData {
    std::vector<std::uint64_t> drop; // sorted, unique
    friend bool operator==(const CofiniteData&, const CofiniteData&) = default;
};
struct IntervalData {
    std::uint64_t lo = 0;
    std::optional<std::uint64_t> hi;
    friend bool operator==(const IntervalData&, const IntervalData&) = default;
};
struct TruncatedData {
    std::vector<bool> bits;
    bool tail_full = false;
    friend bool operator==(const TruncatedData&, const TruncatedData&) = default;
};
struct BlockRuleData {
    BlockPartition partition;
    Selector selector;
    std::uint64_t period = 1;
    std::vector<std::uint64_t> residues; // sorted, each < period; empty when period == 1

    bool block_active(std::uint64_t m) const noexcept;
    friend bool operator==(const BlockRuleData&, const BlockRuleData&) = default;
};
struct PairedRowsData {
    std::uint64_t from_row = 0;
    Affine lo;
    std::optional<Affine> hi;
    friend bool operator==(const PairedRowsData&, const PairedRowsData&) = default;
};
struct LiftData {
    BlockPartition partition;
    SetDescription index_set;
    friend bool operator==(const LiftData&, const LiftData&) = default;
};
struct BoolData {
    std::vector<SetDescription> args; // exactly one for Not
    friend bool operator==(const BoolData&, const BoolData&) = default;
};

struct SetNode {
    SetDescription::Kind kind;
    Universe universe;
    std::variant<FiniteData, CofiniteData, IntervalData, TruncatedData, BlockRuleData, PairedRowsData, LiftData,
                 BoolData>
        data;
};

template <class T>
const T& data_as(const SetDescription& s)
{
    return std::get<T>(s.node().data);
}

/// Cantor pairing used to store omega x omega inside omega.
std::uint64_t cantor_pair(std::uint64_t row, std::uint64_t col);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t x);

/// Whether x is in A. For sets over omega x omega, x is decoded with cantor_unpair.
bool member(const SetDescription& a, std::uint64_t x);
bool member_pair(const SetDescription& a, std::uint64_t row, std::uint64_t col);

/// |A cap [lo, hi)|.
std::uint64_t count_range(const SetDescription& a, std::uint64_t lo, std::uint64_t hi);
/// |A cap xi^{-1}(n)| for the partition xi.
std::uint64_t block_count(const SetDescription& a, const BlockPartition& xi, std::uint64_t n);

/// Least member y with from <= y < limit.
std::optional<std::uint64_t> next_member(const SetDescription& a, std::uint64_t from, std::uint64_t limit);
/// Members below `limit`, at most `max_count` of them, in increasing order.
std::vector<std::uint64_t> members_below(const SetDescription& a, std::uint64_t limit,
                                         std::size_t max_count = static_cast<std::size_t>(-1));

/// Partitions mentioned by BlockRule and Lift leaves, without duplicates.
std::vector<BlockPartition> mentioned_partitions(const SetDescription& a);

} // namespace filterlab
