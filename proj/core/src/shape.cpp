#include "filterlab/shape.hpp"

#include "filterlab/error.hpp"

#include <algorithm>
#include <numeric>

namespace filterlab {

namespace {

// Drops repeated classes so equal patterns compare equal.
OffsetPattern compress(OffsetPattern p)
{
    OffsetPattern out;
    out.cuts.clear();
    out.bits.clear();
    for (std::size_t i = 0; i < p.cuts.size(); ++i) {
        if (i + 1 < p.cuts.size() && p.cuts[i] == p.cuts[i + 1])
            continue;
        if (!out.bits.empty() && out.bits.back() == p.bits[i])
            continue;
        out.cuts.push_back(p.cuts[i]);
        out.bits.push_back(p.bits[i]);
    }
    if (out.cuts.empty())
        return OffsetPattern::constant(false);
    out.cuts.front() = 0;
    return out;
}

} // namespace

OffsetPattern OffsetPattern::constant(bool bit)
{
    OffsetPattern p;
    p.bits = {bit};
    return p;
}

OffsetPattern OffsetPattern::threshold(std::uint64_t t, bool below)
{
    if (t == 0)
        return constant(!below);
    OffsetPattern p;
    p.cuts = {0, t};
    p.bits = {below, !below};
    return p;
}

bool OffsetPattern::at(std::uint64_t j) const
{
    const auto it = std::upper_bound(cuts.begin(), cuts.end(), j);
    return bits[static_cast<std::size_t>(it - cuts.begin()) - 1];
}

std::uint64_t OffsetPattern::count_below(std::uint64_t size) const
{
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (cuts[i] >= size)
            break;
        const std::uint64_t hi = i + 1 < cuts.size() ? std::min(size, cuts[i + 1]) : size;
        if (bits[i])
            n += hi - cuts[i];
    }
    return n;
}

OffsetPattern OffsetPattern::negated() const
{
    OffsetPattern p = *this;
    p.bits.flip();
    return p;
}

OffsetPattern OffsetPattern::combine(const OffsetPattern& a, const OffsetPattern& b, bool conjunction)
{
    std::vector<std::uint64_t> cuts;
    std::merge(a.cuts.begin(), a.cuts.end(), b.cuts.begin(), b.cuts.end(), std::back_inserter(cuts));
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    OffsetPattern out;
    out.cuts = cuts;
    out.bits.clear();
    for (auto c : cuts)
        out.bits.push_back(conjunction ? (a.at(c) && b.at(c)) : (a.at(c) || b.at(c)));
    return compress(std::move(out));
}

std::uint64_t first_block_at_or_after(const BlockPartition& xi, std::uint64_t x)
{
    if (x == 0)
        return 0;
    const std::uint64_t b = xi.block_of(std::min(x, kMaxPosition - 1));
    return xi.start(b) == x ? b : b + 1;
}

namespace {

BlockShape uniform(std::uint64_t from, bool bit)
{
    BlockShape s;
    s.from_block = from;
    s.patterns = {OffsetPattern::constant(bit)};
    return s;
}

BlockShape reduce_period(BlockShape s)
{
    for (std::uint64_t d = 1; d < s.period; ++d) {
        if (s.period % d != 0)
            continue;
        bool ok = true;
        for (std::uint64_t r = d; r < s.period && ok; ++r)
            ok = s.patterns[r] == s.patterns[r % d];
        if (ok) {
            s.patterns.resize(d);
            s.period = d;
            break;
        }
    }
    return s;
}

std::optional<BlockShape> combine_shapes(const BlockShape& a, const BlockShape& b, bool conjunction)
{
    const std::uint64_t period = lcm_capped(a.period, b.period, kMaxShapePeriod);
    if (period == 0)
        return std::nullopt;
    BlockShape s;
    s.from_block = std::max(a.from_block, b.from_block);
    s.period = period;
    s.patterns.clear();
    for (std::uint64_t r = 0; r < period; ++r)
        s.patterns.push_back(OffsetPattern::combine(a.at_block(r), b.at_block(r), conjunction));
    return reduce_period(std::move(s));
}

// Shape by sampling one period of a position-periodic set.
std::optional<BlockShape> sampled_shape(const SetDescription& a, const BlockPartition& xi)
{
    const auto pp = position_period(a);
    if (!pp)
        return std::nullopt;
    if (pp->period == 1)
        return uniform(first_block_at_or_after(xi, pp->start), member(a, pp->start));
    if (!xi.bounded())
        return std::nullopt;
    const std::uint64_t c = xi.eventual_size();
    const std::uint64_t q = pp->period / std::gcd(pp->period, c);
    if (q > kMaxShapePeriod || q * c > (std::uint64_t{1} << 20))
        return std::nullopt;
    const std::uint64_t m0 = std::max<std::uint64_t>(xi.regular_from(), first_block_at_or_after(xi, pp->start));
    BlockShape s;
    s.from_block = m0;
    s.period = q;
    s.patterns.assign(q, OffsetPattern::constant(false));
    for (std::uint64_t m = m0; m < m0 + q; ++m) {
        const std::uint64_t base = xi.start(m);
        OffsetPattern p;
        p.cuts.clear();
        p.bits.clear();
        for (std::uint64_t j = 0; j < c; ++j) {
            p.cuts.push_back(j);
            p.bits.push_back(member(a, base + j));
        }
        s.patterns[m % q] = compress(std::move(p));
    }
    return reduce_period(std::move(s));
}

OffsetPattern selector_pattern(const Selector& sel)
{
    switch (sel.kind) {
    case Selector::Kind::All:
    case Selector::Kind::Removed: return OffsetPattern::constant(true);
    case Selector::Kind::None: return OffsetPattern::constant(false);
    case Selector::Kind::First: return OffsetPattern::threshold(sel.t, true);
    case Selector::Kind::AllButFirst: return OffsetPattern::threshold(sel.t, false);
    }
    return OffsetPattern::constant(false);
}

std::optional<BlockShape> block_rule_shape(const SetDescription& a, const BlockPartition& xi)
{
    const auto& d = data_as<BlockRuleData>(a);
    if (d.selector.kind == Selector::Kind::None)
        return uniform(0, false);
    if (d.selector.kind == Selector::Kind::Removed) {
        auto kept = shape_of(SetDescription::block_rule(d.partition, Selector::all(), d.period, d.residues), xi);
        auto holes = shape_of(SetDescription::cofinite(d.selector.removed), xi);
        if (kept && holes)
            return combine_shapes(*kept, *holes, true);
        return sampled_shape(a, xi);
    }
    if (!(d.partition == xi)) {
        if (d.selector.kind == Selector::Kind::All && d.period == 1)
            return uniform(0, true);
        return sampled_shape(a, xi);
    }
    BlockShape s;
    s.period = d.period;
    s.patterns.clear();
    for (std::uint64_t r = 0; r < d.period; ++r)
        s.patterns.push_back(d.block_active(r) ? selector_pattern(d.selector) : OffsetPattern::constant(false));
    return reduce_period(std::move(s));
}

std::optional<BlockShape> lift_shape(const SetDescription& a, const BlockPartition& xi)
{
    const auto& d = data_as<LiftData>(a);
    const auto inner = shape_of(d.index_set, BlockPartition::constant(1));
    if (!inner)
        return sampled_shape(a, xi);
    if (d.partition == xi) {
        BlockShape s;
        s.from_block = inner->from_block;
        s.period = inner->period;
        s.patterns.clear();
        for (const auto& p : inner->patterns)
            s.patterns.push_back(OffsetPattern::constant(p.at(0)));
        return s;
    }
    if (inner->period == 1) {
        const std::uint64_t from = std::min(inner->from_block, d.partition.max_block());
        return uniform(first_block_at_or_after(xi, d.partition.start(from)), inner->patterns.front().at(0));
    }
    return sampled_shape(a, xi);
}

} // namespace

std::optional<BlockShape> shape_of(const SetDescription& a, const BlockPartition& xi)
{
    if (a.universe() != Universe::Omega)
        return std::nullopt;
    switch (a.kind()) {
    case SetDescription::Kind::Finite: {
        const auto& e = data_as<FiniteData>(a).elems;
        return uniform(e.empty() ? 0 : first_block_at_or_after(xi, e.back() + 1), false);
    }
    case SetDescription::Kind::Cofinite: {
        const auto& e = data_as<CofiniteData>(a).drop;
        return uniform(e.empty() ? 0 : first_block_at_or_after(xi, e.back() + 1), true);
    }
    case SetDescription::Kind::Interval: {
        const auto& d = data_as<IntervalData>(a);
        if (d.hi)
            return uniform(*d.hi <= d.lo ? 0 : first_block_at_or_after(xi, *d.hi), false);
        return uniform(first_block_at_or_after(xi, d.lo), true);
    }
    case SetDescription::Kind::Truncated: {
        const auto& d = data_as<TruncatedData>(a);
        return uniform(first_block_at_or_after(xi, d.bits.size()), d.tail_full);
    }
    case SetDescription::Kind::BlockRule: return block_rule_shape(a, xi);
    case SetDescription::Kind::Lift: return lift_shape(a, xi);
    case SetDescription::Kind::PairedRows: return std::nullopt;
    case SetDescription::Kind::Not: {
        auto s = shape_of(data_as<BoolData>(a).args.front(), xi);
        if (!s)
            return std::nullopt;
        for (auto& p : s->patterns)
            p = p.negated();
        return s;
    }
    case SetDescription::Kind::And:
    case SetDescription::Kind::Or: {
        const bool conj = a.kind() == SetDescription::Kind::And;
        std::optional<BlockShape> acc;
        for (const auto& p : data_as<BoolData>(a).args) {
            auto s = shape_of(p, xi);
            if (!s) {
                acc.reset();
                break;
            }
            acc = acc ? combine_shapes(*acc, *s, conj) : s;
            if (!acc)
                break;
        }
        if (acc)
            return acc;
        return sampled_shape(a, xi);
    }
    }
    return std::nullopt;
}

std::optional<PositionPeriod> position_period(const SetDescription& a)
{
    if (a.universe() != Universe::Omega)
        return std::nullopt;
    switch (a.kind()) {
    case SetDescription::Kind::Finite: {
        const auto& e = data_as<FiniteData>(a).elems;
        return PositionPeriod{e.empty() ? 0 : e.back() + 1, 1};
    }
    case SetDescription::Kind::Cofinite: {
        const auto& e = data_as<CofiniteData>(a).drop;
        return PositionPeriod{e.empty() ? 0 : e.back() + 1, 1};
    }
    case SetDescription::Kind::Interval: {
        const auto& d = data_as<IntervalData>(a);
        return PositionPeriod{d.hi ? *d.hi : d.lo, 1};
    }
    case SetDescription::Kind::Truncated:
        return PositionPeriod{data_as<TruncatedData>(a).bits.size(), 1};
    case SetDescription::Kind::BlockRule: {
        const auto& d = data_as<BlockRuleData>(a);
        if (d.selector.kind == Selector::Kind::None)
            return PositionPeriod{0, 1};
        std::uint64_t start = 0;
        if (d.selector.kind == Selector::Kind::Removed)
            start = d.selector.removed.back() + 1;
        const bool whole = d.selector.kind == Selector::Kind::All || d.selector.kind == Selector::Kind::Removed;
        if (whole && d.period == 1)
            return PositionPeriod{start, 1};
        if (!d.partition.bounded())
            return std::nullopt;
        const std::uint64_t c = d.partition.eventual_size();
        const std::uint64_t period = d.period * c;
        if (period > (std::uint64_t{1} << 20))
            return std::nullopt;
        return PositionPeriod{std::max(start, d.partition.start(d.partition.regular_from())), period};
    }
    case SetDescription::Kind::Lift: {
        const auto& d = data_as<LiftData>(a);
        const auto inner = position_period(d.index_set);
        if (!inner)
            return std::nullopt;
        if (inner->start > d.partition.max_block())
            return std::nullopt;
        if (inner->period == 1)
            return PositionPeriod{d.partition.start(inner->start), 1};
        if (!d.partition.bounded())
            return std::nullopt;
        const std::uint64_t period = inner->period * d.partition.eventual_size();
        if (period > (std::uint64_t{1} << 20))
            return std::nullopt;
        return PositionPeriod{d.partition.start(std::max<std::uint64_t>(d.partition.regular_from(), inner->start)),
                              period};
    }
    case SetDescription::Kind::PairedRows: return std::nullopt;
    case SetDescription::Kind::And:
    case SetDescription::Kind::Or:
    case SetDescription::Kind::Not: {
        PositionPeriod acc{0, 1};
        for (const auto& p : data_as<BoolData>(a).args) {
            const auto s = position_period(p);
            if (!s)
                return std::nullopt;
            acc.start = std::max(acc.start, s->start);
            acc.period = lcm_capped(acc.period, s->period, std::uint64_t{1} << 20);
            if (acc.period == 0)
                return std::nullopt;
        }
        return acc;
    }
    }
    return std::nullopt;
}

} // namespace filterlab
