#include "filterlab/partition.hpp"

#include "filterlab/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace filterlab {

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat(u128 v)
{
    return v > kSat ? kSat : static_cast<std::uint64_t>(v);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
{
    return sat(u128{a} + b);
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
{
    return sat(u128{a} * b);
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t e)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        r = sat_mul(r, base);
        if (r == kSat)
            break;
    }
    return r;
}

// Sum_{t=1}^{n} ceil(log2 t), saturating.
std::uint64_t ceil_log2_prefix_sum(std::uint64_t n)
{
    u128 total = 0;
    for (std::uint64_t v = 1; v < 64; ++v) {
        const std::uint64_t lo = std::uint64_t{1} << (v - 1); // t in (lo, 2lo]
        if (n <= lo)
            break;
        const std::uint64_t hi = std::min<std::uint64_t>(n, lo << 1);
        total += u128{hi - lo} * v;
    }
    if (n > (std::uint64_t{1} << 63))
        total += u128{n - (std::uint64_t{1} << 63)} * 64;
    return sat(total);
}

} // namespace

std::uint64_t ceil_log2(std::uint64_t v)
{
    if (v <= 1)
        return 0;
    return 64 - static_cast<std::uint64_t>(__builtin_clzll(v - 1));
}

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap)
{
    const std::uint64_t g = std::gcd(a, b);
    const u128 l = u128{a / g} * b;
    return l > cap ? 0 : static_cast<std::uint64_t>(l);
}

BlockPartition::BlockPartition() : BlockPartition({}, TailRule{TailRule::Kind::Constant, 1, 2}) {}

BlockPartition::BlockPartition(std::vector<std::uint64_t> prefix, TailRule tail)
    : prefix_(std::move(prefix)), tail_(tail)
{
    normalize();
}

BlockPartition BlockPartition::constant(std::uint64_t c)
{
    return BlockPartition({}, TailRule{TailRule::Kind::Constant, static_cast<std::int64_t>(c), 2});
}

BlockPartition BlockPartition::linear(std::int64_t c)
{
    return BlockPartition({}, TailRule{TailRule::Kind::Linear, c, 2});
}

BlockPartition BlockPartition::ceil_log2(std::int64_t c)
{
    return BlockPartition({}, TailRule{TailRule::Kind::CeilLog2, c, 2});
}

BlockPartition BlockPartition::power(std::uint64_t base, std::int64_t c)
{
    return BlockPartition({}, TailRule{TailRule::Kind::Power, c, base});
}

BlockPartition BlockPartition::dyadic()
{
    return BlockPartition({1}, TailRule{TailRule::Kind::Power, -1, 2});
}

namespace {

bool rule_valid_at(const TailRule& t, std::uint64_t n)
{
    const std::int64_t arg = static_cast<std::int64_t>(n) + t.c;
    switch (t.kind) {
    case TailRule::Kind::Constant: return t.c >= 1;
    case TailRule::Kind::Linear: return arg >= 1;
    case TailRule::Kind::CeilLog2: return arg >= 2;
    case TailRule::Kind::Power: return arg >= 0 && t.base >= 2;
    }
    return false;
}

} // namespace

void BlockPartition::normalize()
{
    for (auto s : prefix_)
        if (s == 0)
            throw PreconditionError("block sizes must be at least 1");
    if (!rule_valid_at(tail_, prefix_.size()))
        throw PreconditionError("tail size rule yields a block of size < 1");
    if (tail_.kind != TailRule::Kind::Power)
        tail_.base = 2;
    if (tail_.kind == TailRule::Kind::Constant && tail_.c > static_cast<std::int64_t>(kMaxPosition))
        throw RangeError("constant block size too large");
    // Trim trailing prefix entries the tail rule reproduces exactly.
    std::vector<std::uint64_t> trimmed = prefix_;
    while (!trimmed.empty()) {
        const std::uint64_t n = trimmed.size() - 1;
        if (!rule_valid_at(tail_, n) || tail_size(n) != trimmed.back())
            break;
        trimmed.pop_back();
    }
    prefix_ = std::move(trimmed);

    prefix_starts_.assign(prefix_.size() + 1, 0);
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
        prefix_starts_[i + 1] = sat_add(prefix_starts_[i], prefix_[i]);
        if (prefix_starts_[i + 1] > kMaxPosition)
            throw RangeError("prefix table exceeds the representable range");
    }

    // Largest n with start(n + 1) <= kMaxPosition.
    std::uint64_t lo = 0, hi = kMaxPosition;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (start_saturating(mid + 1) <= kMaxPosition)
            lo = mid;
        else
            hi = mid - 1;
    }
    max_block_ = lo;
}

std::uint64_t BlockPartition::tail_size(std::uint64_t n) const
{
    const std::int64_t arg = static_cast<std::int64_t>(n) + tail_.c;
    switch (tail_.kind) {
    case TailRule::Kind::Constant: return static_cast<std::uint64_t>(tail_.c);
    case TailRule::Kind::Linear: return static_cast<std::uint64_t>(arg);
    case TailRule::Kind::CeilLog2: return filterlab::ceil_log2(static_cast<std::uint64_t>(arg));
    case TailRule::Kind::Power: return sat_pow(tail_.base, static_cast<std::uint64_t>(arg));
    }
    return 1;
}

std::uint64_t BlockPartition::tail_sum(std::uint64_t n) const
{
    const std::uint64_t p = prefix_.size();
    if (n <= p)
        return 0;
    const std::uint64_t d = n - p;
    switch (tail_.kind) {
    case TailRule::Kind::Constant:
        return sat_mul(d, static_cast<std::uint64_t>(tail_.c));
    case TailRule::Kind::Linear: {
        // sum_{k=p}^{n-1} (k + c) = d * (p + c) + d (d - 1) / 2
        const u128 first = static_cast<u128>(static_cast<std::int64_t>(p) + tail_.c);
        const u128 tri = (d % 2 == 0) ? u128{d / 2} * (d - 1) : u128{d} * ((d - 1) / 2);
        if (d > (std::uint64_t{1} << 40))
            return kSat;
        return sat(u128{d} * first + tri);
    }
    case TailRule::Kind::CeilLog2: {
        const std::uint64_t a = static_cast<std::uint64_t>(static_cast<std::int64_t>(p) + tail_.c - 1);
        const std::uint64_t b = sat_add(a, d);
        return sat(u128{ceil_log2_prefix_sum(b)} - ceil_log2_prefix_sum(a));
    }
    case TailRule::Kind::Power: {
        u128 total = 0;
        std::uint64_t term = tail_size(p);
        for (std::uint64_t i = 0; i < d; ++i) {
            total += term;
            if (total > kSat)
                return kSat;
            term = sat_mul(term, tail_.base);
        }
        return sat(total);
    }
    }
    return kSat;
}

std::uint64_t BlockPartition::start_saturating(std::uint64_t n) const
{
    if (n <= prefix_.size())
        return prefix_starts_[n];
    return sat_add(prefix_starts_.back(), tail_sum(n));
}

std::uint64_t BlockPartition::size(std::uint64_t n) const
{
    if (n < prefix_.size())
        return prefix_[n];
    if (n > max_block_)
        throw RangeError("block index " + std::to_string(n) + " beyond representable range");
    return tail_size(n);
}

std::uint64_t BlockPartition::start(std::uint64_t n) const
{
    if (n > max_block_ + 1)
        throw RangeError("block index " + std::to_string(n) + " beyond representable range");
    return start_saturating(n);
}

std::uint64_t BlockPartition::block_of(std::uint64_t x) const
{
    if (x >= kMaxPosition)
        throw RangeError("position " + std::to_string(x) + " beyond representable range");
    std::uint64_t lo = 0, hi = std::min(x, max_block_);
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (start_saturating(mid) <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

BlockPartition BlockPartition::suffix_from(std::uint64_t m) const
{
    std::vector<std::uint64_t> p;
    for (std::uint64_t i = m; i < prefix_.size(); ++i)
        p.push_back(prefix_[i]);
    TailRule t = tail_;
    if (t.kind != TailRule::Kind::Constant)
        t.c += static_cast<std::int64_t>(m);
    return BlockPartition(std::move(p), t);
}

BlockPartition BlockPartition::with_prefix(const std::vector<std::uint64_t>& lengths) const
{
    std::vector<std::uint64_t> p = lengths;
    p.insert(p.end(), prefix_.begin(), prefix_.end());
    TailRule t = tail_;
    if (t.kind != TailRule::Kind::Constant)
        t.c -= static_cast<std::int64_t>(lengths.size());
    return BlockPartition(std::move(p), t);
}

} // namespace filterlab
