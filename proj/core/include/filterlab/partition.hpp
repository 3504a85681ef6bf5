#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace filterlab {

/// Largest position (exclusive) any set description may address.
inline constexpr std::uint64_t kMaxPosition = std::uint64_t{1} << 62;

/// Size rule for blocks past the explicit prefix table.
///
/// The rule is evaluated at the absolute block index n:
///   Constant  |block n| = c
///   Linear    |block n| = n + c
///   CeilLog2  |block n| = ceil(log2(n + c))
///   Power     |block n| = base^(n + c)
struct TailRule {
    enum class Kind { Constant, Linear, CeilLog2, Power };

    Kind kind = Kind::Constant;
    std::int64_t c = 1;
    std::uint64_t base = 2; // Power only

    friend bool operator==(const TailRule&, const TailRule&) = default;
};

/// A finite-to-one surjection xi : omega -> omega laid out as consecutive
/// intervals: xi^{-1}(n) = [start(n), start(n+1)).
///
/// Sizes come from an explicit prefix table followed by a tail rule. Every
/// size is at least 1, and sizes are nondecreasing from `regular_from()` on,
/// which every tail rule guarantees.
class BlockPartition {
public:
    BlockPartition(); // constant blocks of size 1
    BlockPartition(std::vector<std::uint64_t> prefix, TailRule tail);

    static BlockPartition constant(std::uint64_t c);
    static BlockPartition linear(std::int64_t c);
    static BlockPartition ceil_log2(std::int64_t c);
    static BlockPartition power(std::uint64_t base, std::int64_t c);
    /// Blocks {0}, [1,2), [2,4), [4,8), ...; block n >= 1 is [2^(n-1), 2^n).
    static BlockPartition dyadic();

    std::uint64_t size(std::uint64_t n) const;
    std::uint64_t start(std::uint64_t n) const;
    std::uint64_t end(std::uint64_t n) const { return start(n + 1); }
    /// Index of the block containing position x.
    std::uint64_t block_of(std::uint64_t x) const;

    /// Tail is a Constant rule, so sup of sizes is finite.
    bool bounded() const noexcept { return tail_.kind == TailRule::Kind::Constant; }
    std::uint64_t eventual_size() const noexcept { return static_cast<std::uint64_t>(tail_.c); }
    std::uint64_t regular_from() const noexcept { return prefix_.size(); }

    /// Largest block index whose end is still representable.
    std::uint64_t max_block() const noexcept { return max_block_; }

    /// Partition whose block n is this partition's block m + n (positions
    /// shifted down by start(m)).
    BlockPartition suffix_from(std::uint64_t m) const;
    /// Prepends explicit sizes; the old block n becomes block n + lengths.size().
    BlockPartition with_prefix(const std::vector<std::uint64_t>& lengths) const;

    const std::vector<std::uint64_t>& prefix() const noexcept { return prefix_; }
    const TailRule& tail() const noexcept { return tail_; }

    friend bool operator==(const BlockPartition& a, const BlockPartition& b)
    {
        return a.prefix_ == b.prefix_ && a.tail_ == b.tail_;
    }

private:
    std::uint64_t tail_size(std::uint64_t n) const;
    // Sum of tail sizes over [prefix_.size(), n), saturating at 2^64-1.
    std::uint64_t tail_sum(std::uint64_t n) const;
    std::uint64_t start_saturating(std::uint64_t n) const;
    void normalize();

    std::vector<std::uint64_t> prefix_;
    std::vector<std::uint64_t> prefix_starts_;
    TailRule tail_;
    std::uint64_t max_block_ = 0;
};

/// ceil(log2(v)) for v >= 1.
std::uint64_t ceil_log2(std::uint64_t v);

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap);

} // namespace filterlab
