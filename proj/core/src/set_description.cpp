#include "filterlab/set_description.hpp"

#include "filterlab/error.hpp"
#include "filterlab/shape.hpp"

#include <algorithm>
#include <cmath>

namespace filterlab {

namespace {

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void check_position(std::uint64_t x)
{
    if (x >= kMaxPosition)
        throw RangeError("position " + std::to_string(x) + " beyond representable range");
}

constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 24;

} // namespace

Selector Selector::first(std::uint64_t t)
{
    return t == 0 ? none() : Selector{Kind::First, t, {}};
}

Selector Selector::all_but_first(std::uint64_t t)
{
    return t == 0 ? all() : Selector{Kind::AllButFirst, t, {}};
}

Selector Selector::removed_points(std::vector<std::uint64_t> pts)
{
    pts = sorted_unique(std::move(pts));
    if (pts.empty())
        return all();
    return Selector{Kind::Removed, 0, std::move(pts)};
}

bool Selector::keeps_offset(std::uint64_t j) const noexcept
{
    switch (kind) {
    case Kind::All: return true;
    case Kind::None: return false;
    case Kind::First: return j < t;
    case Kind::AllButFirst: return j >= t;
    case Kind::Removed: return true;
    }
    return false;
}

std::uint64_t Affine::at(std::uint64_t n) const noexcept
{
    const __int128 v = static_cast<__int128>(slope) * static_cast<__int128>(n) + offset;
    if (v <= 0)
        return 0;
    if (v >= static_cast<__int128>(kMaxPosition))
        return kMaxPosition;
    return static_cast<std::uint64_t>(v);
}

bool BlockRuleData::block_active(std::uint64_t m) const noexcept
{
    if (period <= 1)
        return true;
    return std::binary_search(residues.begin(), residues.end(), m % period);
}

// ---------------------------------------------------------------------------

SetDescription::SetDescription() : SetDescription(finite({})) {}

SetDescription SetDescription::finite(std::vector<std::uint64_t> elems)
{
    elems = sorted_unique(std::move(elems));
    for (auto e : elems)
        check_position(e);
    return SetDescription(std::make_shared<SetNode>(SetNode{Kind::Finite, Universe::Omega, FiniteData{std::move(elems)}}));
}

SetDescription SetDescription::cofinite(std::vector<std::uint64_t> drop)
{
    drop = sorted_unique(std::move(drop));
    for (auto e : drop)
        check_position(e);
    return SetDescription(
        std::make_shared<SetNode>(SetNode{Kind::Cofinite, Universe::Omega, CofiniteData{std::move(drop)}}));
}

SetDescription SetDescription::interval(std::uint64_t lo, std::optional<std::uint64_t> hi)
{
    check_position(lo);
    if (hi) {
        check_position(*hi);
        if (*hi < lo)
            hi = lo;
    }
    return SetDescription(std::make_shared<SetNode>(SetNode{Kind::Interval, Universe::Omega, IntervalData{lo, hi}}));
}

SetDescription SetDescription::truncated(std::vector<bool> bits, bool tail_full)
{
    return SetDescription(
        std::make_shared<SetNode>(SetNode{Kind::Truncated, Universe::Omega, TruncatedData{std::move(bits), tail_full}}));
}

SetDescription SetDescription::block_rule(BlockPartition partition, Selector selector, std::uint64_t period,
                                          std::vector<std::uint64_t> residues)
{
    if (period == 0)
        throw PreconditionError("block rule period must be positive");
    if (period > kMaxShapePeriod)
        throw PreconditionError("block rule period too large");
    for (auto& r : residues)
        if (r >= period)
            throw PreconditionError("block rule residue out of range");
    residues = sorted_unique(std::move(residues));
    if (period == 1 || residues.size() == period) {
        period = 1;
        residues.clear();
    } else if (residues.empty()) {
        selector = Selector::none();
        period = 1;
    }
    if (selector.kind == Selector::Kind::None) {
        period = 1;
        residues.clear();
    }
    for (auto p : selector.removed)
        check_position(p);
    return SetDescription(std::make_shared<SetNode>(SetNode{
        Kind::BlockRule, Universe::Omega,
        BlockRuleData{std::move(partition), std::move(selector), period, std::move(residues)}}));
}

SetDescription SetDescription::paired_rows(std::uint64_t from_row, Affine lo, std::optional<Affine> hi)
{
    return SetDescription(std::make_shared<SetNode>(
        SetNode{Kind::PairedRows, Universe::OmegaSquared, PairedRowsData{from_row, lo, hi}}));
}

SetDescription SetDescription::lift(BlockPartition partition, SetDescription index_set)
{
    if (index_set.universe() != Universe::Omega)
        throw UniverseMismatch("lift: index set must be a subset of omega");
    return SetDescription(std::make_shared<SetNode>(
        SetNode{Kind::Lift, Universe::Omega, LiftData{std::move(partition), std::move(index_set)}}));
}

namespace {

Universe common_universe(const std::vector<SetDescription>& parts)
{
    if (parts.empty())
        return Universe::Omega;
    const Universe u = parts.front().universe();
    for (const auto& p : parts)
        if (p.universe() != u)
            throw UniverseMismatch("boolean combination mixes subsets of omega and of omega x omega");
    return u;
}

} // namespace

SetDescription SetDescription::all_of(std::vector<SetDescription> parts)
{
    if (parts.empty())
        throw PreconditionError("and() needs at least one argument");
    if (parts.size() == 1)
        return parts.front();
    const Universe u = common_universe(parts);
    return SetDescription(std::make_shared<SetNode>(SetNode{Kind::And, u, BoolData{std::move(parts)}}));
}

SetDescription SetDescription::any_of(std::vector<SetDescription> parts)
{
    if (parts.empty())
        throw PreconditionError("or() needs at least one argument");
    if (parts.size() == 1)
        return parts.front();
    const Universe u = common_universe(parts);
    return SetDescription(std::make_shared<SetNode>(SetNode{Kind::Or, u, BoolData{std::move(parts)}}));
}

SetDescription SetDescription::complement(SetDescription s)
{
    if (s.kind() == Kind::Not)
        return data_as<BoolData>(s).args.front();
    const Universe u = s.universe();
    return SetDescription(std::make_shared<SetNode>(SetNode{Kind::Not, u, BoolData{{std::move(s)}}}));
}

SetDescription SetDescription::evens()
{
    return block_rule(BlockPartition::constant(2), Selector::first(1));
}

SetDescription SetDescription::odds()
{
    return block_rule(BlockPartition::constant(2), Selector::all_but_first(1));
}

SetDescription::Kind SetDescription::kind() const noexcept
{
    return node_->kind;
}

Universe SetDescription::universe() const noexcept
{
    return node_->universe;
}

bool operator==(const SetDescription& a, const SetDescription& b)
{
    if (a.node_ == b.node_)
        return true;
    return a.node_->kind == b.node_->kind && a.node_->universe == b.node_->universe && a.node_->data == b.node_->data;
}

// ---------------------------------------------------------------------------

std::uint64_t cantor_pair(std::uint64_t row, std::uint64_t col)
{
    const unsigned __int128 w = static_cast<unsigned __int128>(row) + col;
    const unsigned __int128 v = w * (w + 1) / 2 + col;
    if (v >= kMaxPosition)
        throw RangeError("paired coordinate beyond representable range");
    return static_cast<std::uint64_t>(v);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t x)
{
    auto tri = [](std::uint64_t w) { return static_cast<unsigned __int128>(w) * (w + 1) / 2; };
    std::uint64_t w = static_cast<std::uint64_t>((std::sqrt(8.0L * static_cast<long double>(x) + 1.0L) - 1.0L) / 2.0L);
    while (tri(w) > x)
        --w;
    while (tri(w + 1) <= x)
        ++w;
    const std::uint64_t col = x - static_cast<std::uint64_t>(tri(w));
    return {w - col, col};
}

bool member_pair(const SetDescription& a, std::uint64_t row, std::uint64_t col)
{
    if (a.universe() != Universe::OmegaSquared)
        throw UniverseMismatch("member_pair on a subset of omega");
    switch (a.kind()) {
    case SetDescription::Kind::PairedRows: {
        const auto& d = data_as<PairedRowsData>(a);
        if (row < d.from_row)
            return false;
        if (col < d.lo.at(row))
            return false;
        return !d.hi || col < d.hi->at(row);
    }
    case SetDescription::Kind::And:
        for (const auto& p : data_as<BoolData>(a).args)
            if (!member_pair(p, row, col))
                return false;
        return true;
    case SetDescription::Kind::Or:
        for (const auto& p : data_as<BoolData>(a).args)
            if (member_pair(p, row, col))
                return true;
        return false;
    case SetDescription::Kind::Not:
        return !member_pair(data_as<BoolData>(a).args.front(), row, col);
    default:
        throw UniverseMismatch("unexpected kind for a subset of omega x omega");
    }
}

bool member(const SetDescription& a, std::uint64_t x)
{
    if (a.universe() == Universe::OmegaSquared) {
        const auto [r, c] = cantor_unpair(x);
        return member_pair(a, r, c);
    }
    switch (a.kind()) {
    case SetDescription::Kind::Finite: {
        const auto& e = data_as<FiniteData>(a).elems;
        return std::binary_search(e.begin(), e.end(), x);
    }
    case SetDescription::Kind::Cofinite: {
        const auto& e = data_as<CofiniteData>(a).drop;
        return !std::binary_search(e.begin(), e.end(), x);
    }
    case SetDescription::Kind::Interval: {
        const auto& d = data_as<IntervalData>(a);
        return x >= d.lo && (!d.hi || x < *d.hi);
    }
    case SetDescription::Kind::Truncated: {
        const auto& d = data_as<TruncatedData>(a);
        return x < d.bits.size() ? static_cast<bool>(d.bits[x]) : d.tail_full;
    }
    case SetDescription::Kind::BlockRule: {
        const auto& d = data_as<BlockRuleData>(a);
        if (d.selector.kind == Selector::Kind::None)
            return false;
        const std::uint64_t m = d.partition.block_of(x);
        if (!d.block_active(m))
            return false;
        if (d.selector.kind == Selector::Kind::Removed)
            return !std::binary_search(d.selector.removed.begin(), d.selector.removed.end(), x);
        return d.selector.keeps_offset(x - d.partition.start(m));
    }
    case SetDescription::Kind::Lift: {
        const auto& d = data_as<LiftData>(a);
        return member(d.index_set, d.partition.block_of(x));
    }
    case SetDescription::Kind::And:
        for (const auto& p : data_as<BoolData>(a).args)
            if (!member(p, x))
                return false;
        return true;
    case SetDescription::Kind::Or:
        for (const auto& p : data_as<BoolData>(a).args)
            if (member(p, x))
                return true;
        return false;
    case SetDescription::Kind::Not:
        return !member(data_as<BoolData>(a).args.front(), x);
    case SetDescription::Kind::PairedRows:
        break;
    }
    throw UniverseMismatch("unexpected kind");
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t count_sorted(const std::vector<std::uint64_t>& v, std::uint64_t lo, std::uint64_t hi)
{
    return static_cast<std::uint64_t>(std::lower_bound(v.begin(), v.end(), hi) - std::lower_bound(v.begin(), v.end(), lo));
}

std::uint64_t enumerate_count(const SetDescription& a, std::uint64_t lo, std::uint64_t hi)
{
    if (hi - lo > kEnumerationCap)
        throw RangeError("range too large to count by enumeration");
    std::uint64_t n = 0;
    for (std::uint64_t x = lo; x < hi; ++x)
        n += member(a, x) ? 1 : 0;
    return n;
}

// Number of m in [a, b) with m mod q in residues.
std::uint64_t count_residues(std::uint64_t a, std::uint64_t b, std::uint64_t q, const std::vector<std::uint64_t>& res)
{
    if (b <= a)
        return 0;
    auto upto = [&](std::uint64_t n) { // m in [0, n)
        std::uint64_t full = n / q, rem = n % q, c = full * res.size();
        for (auto r : res)
            if (r < rem)
                ++c;
        return c;
    };
    return upto(b) - upto(a);
}

std::uint64_t block_rule_count(const BlockRuleData& d, std::uint64_t lo, std::uint64_t hi)
{
    if (d.selector.kind == Selector::Kind::None || hi <= lo)
        return 0;
    const BlockPartition& p = d.partition;
    std::uint64_t total = 0;
    std::uint64_t m = p.block_of(lo);
    auto partial = [&](std::uint64_t blk, std::uint64_t from, std::uint64_t to) -> std::uint64_t {
        if (!d.block_active(blk) || to <= from)
            return 0;
        const std::uint64_t s = p.start(blk);
        std::uint64_t a = from - s, b = to - s;
        switch (d.selector.kind) {
        case Selector::Kind::All:
        case Selector::Kind::Removed: return b - a;
        case Selector::Kind::None: return 0;
        case Selector::Kind::First: return b <= d.selector.t ? b - a : (a >= d.selector.t ? 0 : d.selector.t - a);
        case Selector::Kind::AllButFirst: {
            const std::uint64_t t = d.selector.t;
            return a >= t ? b - a : (b <= t ? 0 : b - t);
        }
        }
        return 0;
    };
    while (m <= p.max_block()) {
        const std::uint64_t s = p.start(m);
        if (s >= hi)
            break;
        // Closed form for a run of whole blocks in the constant-size region.
        if (p.bounded() && m >= p.regular_from() && s >= lo && d.selector.kind != Selector::Kind::Removed) {
            const std::uint64_t c = p.eventual_size();
            const std::uint64_t whole = (hi - s) / c;
            if (whole > 1) {
                const std::uint64_t per = partial(m, s, s + c) > 0 || !d.block_active(m)
                                              ? (d.selector.kind == Selector::Kind::First
                                                     ? std::min(d.selector.t, c)
                                                     : (d.selector.kind == Selector::Kind::AllButFirst
                                                            ? (c > d.selector.t ? c - d.selector.t : 0)
                                                            : c))
                                              : 0;
                const std::uint64_t active = d.period <= 1 ? whole : count_residues(m, m + whole, d.period, d.residues);
                total += per * active;
                m += whole;
                continue;
            }
        }
        const std::uint64_t e = p.end(m);
        total += partial(m, std::max(lo, s), std::min(hi, e));
        ++m;
    }
    if (d.selector.kind == Selector::Kind::Removed) {
        // Removed points only reduce the count inside active blocks.
        const auto& r = d.selector.removed;
        for (auto it = std::lower_bound(r.begin(), r.end(), lo); it != r.end() && *it < hi; ++it)
            if (d.block_active(p.block_of(*it)))
                --total;
    }
    return total;
}

std::uint64_t lift_count(const LiftData& d, std::uint64_t lo, std::uint64_t hi)
{
    std::uint64_t total = 0;
    const BlockPartition& p = d.partition;
    std::uint64_t m = p.block_of(lo);
    std::uint64_t steps = 0;
    while (m <= p.max_block()) {
        const std::uint64_t s = p.start(m);
        if (s >= hi)
            break;
        if (member(d.index_set, m))
            total += std::min(hi, p.end(m)) - std::max(lo, s);
        ++m;
        if (++steps > kEnumerationCap)
            throw RangeError("range spans too many blocks to count");
    }
    return total;
}

} // namespace

std::uint64_t count_range(const SetDescription& a, std::uint64_t lo, std::uint64_t hi)
{
    if (hi <= lo)
        return 0;
    if (a.universe() == Universe::OmegaSquared)
        return enumerate_count(a, lo, hi);
    switch (a.kind()) {
    case SetDescription::Kind::Finite:
        return count_sorted(data_as<FiniteData>(a).elems, lo, hi);
    case SetDescription::Kind::Cofinite:
        return (hi - lo) - count_sorted(data_as<CofiniteData>(a).drop, lo, hi);
    case SetDescription::Kind::Interval: {
        const auto& d = data_as<IntervalData>(a);
        const std::uint64_t a0 = std::max(lo, d.lo);
        const std::uint64_t b0 = d.hi ? std::min(hi, *d.hi) : hi;
        return b0 > a0 ? b0 - a0 : 0;
    }
    case SetDescription::Kind::Truncated: {
        const auto& d = data_as<TruncatedData>(a);
        const std::uint64_t n = d.bits.size();
        std::uint64_t c = 0;
        for (std::uint64_t x = lo; x < std::min(hi, n); ++x)
            c += d.bits[x] ? 1 : 0;
        if (hi > n && d.tail_full)
            c += hi - std::max(lo, n);
        return c;
    }
    case SetDescription::Kind::BlockRule:
        return block_rule_count(data_as<BlockRuleData>(a), lo, hi);
    case SetDescription::Kind::Lift:
        return lift_count(data_as<LiftData>(a), lo, hi);
    case SetDescription::Kind::Not:
        return (hi - lo) - count_range(data_as<BoolData>(a).args.front(), lo, hi);
    default:
        break;
    }
    if (hi - lo <= (std::uint64_t{1} << 20))
        return enumerate_count(a, lo, hi);
    if (auto pp = position_period(a)) {
        std::uint64_t total = 0;
        std::uint64_t x = lo;
        if (x < pp->start) {
            const std::uint64_t mid = std::min(hi, pp->start);
            total += enumerate_count(a, x, mid);
            x = mid;
        }
        if (x < hi) {
            const std::uint64_t len = hi - x;
            const std::uint64_t per = enumerate_count(a, x, x + std::min(len, pp->period));
            const std::uint64_t full = len / pp->period;
            if (full > 0)
                total += per * full + enumerate_count(a, x + full * pp->period, hi);
            else
                total += per;
        }
        return total;
    }
    return enumerate_count(a, lo, hi);
}

std::uint64_t block_count(const SetDescription& a, const BlockPartition& xi, std::uint64_t n)
{
    return count_range(a, xi.start(n), xi.end(n));
}

std::optional<std::uint64_t> next_member(const SetDescription& a, std::uint64_t from, std::uint64_t limit)
{
    limit = std::min(limit, kMaxPosition);
    if (from >= limit)
        return std::nullopt;
    if (a.universe() == Universe::Omega) {
        switch (a.kind()) {
        case SetDescription::Kind::Finite: {
            const auto& e = data_as<FiniteData>(a).elems;
            auto it = std::lower_bound(e.begin(), e.end(), from);
            if (it != e.end() && *it < limit)
                return *it;
            return std::nullopt;
        }
        case SetDescription::Kind::Interval: {
            const auto& d = data_as<IntervalData>(a);
            const std::uint64_t y = std::max(from, d.lo);
            if (y < limit && (!d.hi || y < *d.hi))
                return y;
            return std::nullopt;
        }
        case SetDescription::Kind::Cofinite: {
            const auto& e = data_as<CofiniteData>(a).drop;
            std::uint64_t y = from;
            for (auto it = std::lower_bound(e.begin(), e.end(), y); it != e.end() && *it == y; ++it)
                ++y;
            return y < limit ? std::optional<std::uint64_t>(y) : std::nullopt;
        }
        case SetDescription::Kind::Truncated: {
            const auto& d = data_as<TruncatedData>(a);
            const std::uint64_t n = d.bits.size();
            for (std::uint64_t y = from; y < std::min(n, limit); ++y)
                if (d.bits[y])
                    return y;
            const std::uint64_t y = std::max(from, n);
            if (d.tail_full && y < limit)
                return y;
            return std::nullopt;
        }
        case SetDescription::Kind::BlockRule: {
            const auto& d = data_as<BlockRuleData>(a);
            if (d.selector.kind == Selector::Kind::None)
                return std::nullopt;
            const BlockPartition& p = d.partition;
            std::uint64_t last = p.max_block();
            // Bounded tail blocks too short to keep anything past the first t.
            if (d.selector.kind == Selector::Kind::AllButFirst && p.bounded() && p.eventual_size() <= d.selector.t) {
                if (p.regular_from() == 0)
                    return std::nullopt;
                last = std::min(last, p.regular_from() - 1);
            }
            for (std::uint64_t m = p.block_of(from); m <= last; ++m) {
                const std::uint64_t s = p.start(m);
                if (s >= limit)
                    return std::nullopt;
                if (!d.block_active(m))
                    continue;
                const std::uint64_t e = std::min(p.end(m), limit);
                std::uint64_t y = std::max(from, s);
                if (d.selector.kind == Selector::Kind::AllButFirst)
                    y = std::max(y, s + d.selector.t);
                for (; y < e; ++y) {
                    if (d.selector.kind == Selector::Kind::First && y - s >= d.selector.t)
                        break;
                    if (member(a, y))
                        return y;
                }
            }
            return std::nullopt;
        }
        case SetDescription::Kind::Lift: {
            const auto& d = data_as<LiftData>(a);
            const std::uint64_t m0 = d.partition.block_of(from);
            if (member(d.index_set, m0))
                return from;
            const std::uint64_t mlimit = d.partition.block_of(limit - 1) + 1;
            auto m = next_member(d.index_set, m0 + 1, mlimit);
            if (!m)
                return std::nullopt;
            const std::uint64_t y = d.partition.start(*m);
            return y < limit ? std::optional<std::uint64_t>(y) : std::nullopt;
        }
        case SetDescription::Kind::And: {
            const auto& args = data_as<BoolData>(a).args;
            std::uint64_t x = from;
            while (x < limit) {
                auto y = next_member(args.front(), x, limit);
                if (!y)
                    return std::nullopt;
                bool ok = true;
                for (std::size_t i = 1; i < args.size() && ok; ++i)
                    ok = member(args[i], *y);
                if (ok)
                    return y;
                x = *y + 1;
            }
            return std::nullopt;
        }
        case SetDescription::Kind::Or: {
            // Doubling windows, so one argument that scans linearly cannot
            // dominate when another has a nearby member.
            const auto& args = data_as<BoolData>(a).args;
            std::uint64_t window = 64;
            for (std::uint64_t lo = from; lo < limit;) {
                const std::uint64_t hi = limit - lo > window ? lo + window : limit;
                std::optional<std::uint64_t> best;
                for (const auto& p : args) {
                    auto y = next_member(p, lo, best ? *best : hi);
                    if (y && (!best || *y < *best))
                        best = y;
                }
                if (best)
                    return best;
                lo = hi;
                window *= 2;
            }
            return std::nullopt;
        }
        default:
            break;
        }
    }
    for (std::uint64_t x = from; x < limit; ++x)
        if (member(a, x))
            return x;
    return std::nullopt;
}

std::vector<std::uint64_t> members_below(const SetDescription& a, std::uint64_t limit, std::size_t max_count)
{
    std::vector<std::uint64_t> out;
    std::uint64_t x = 0;
    while (out.size() < max_count) {
        auto y = next_member(a, x, limit);
        if (!y)
            break;
        out.push_back(*y);
        x = *y + 1;
    }
    return out;
}

namespace {

void collect(const SetDescription& a, std::vector<BlockPartition>& out)
{
    auto add = [&](const BlockPartition& p) {
        if (std::find(out.begin(), out.end(), p) == out.end())
            out.push_back(p);
    };
    switch (a.kind()) {
    case SetDescription::Kind::BlockRule: add(data_as<BlockRuleData>(a).partition); break;
    case SetDescription::Kind::Lift: add(data_as<LiftData>(a).partition); break;
    case SetDescription::Kind::And:
    case SetDescription::Kind::Or:
    case SetDescription::Kind::Not:
        for (const auto& p : data_as<BoolData>(a).args)
            collect(p, out);
        break;
    default: break;
    }
}

} // namespace

std::vector<BlockPartition> mentioned_partitions(const SetDescription& a)
{
    std::vector<BlockPartition> out;
    collect(a, out);
    return out;
}

} // namespace filterlab
