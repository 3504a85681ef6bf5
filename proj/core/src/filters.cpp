#include "filterlab/filters.hpp"

#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/shape.hpp"
#include "filterlab/weights.hpp"

#include <algorithm>
#include <cmath>

namespace filterlab {

std::uint64_t PointSequence::at(std::uint64_t k) const
{
    if (constant)
        return *constant;
    if (k < prefix.size())
        return prefix[k];
    const std::int64_t v = static_cast<std::int64_t>(k) + shift;
    if (v < 0)
        throw RangeError("sequence value below zero at index " + std::to_string(k));
    return static_cast<std::uint64_t>(v);
}

// ---------------------------------------------------------------------------

namespace {

FilterPresentation::Kind kind_of(const FilterNode& n)
{
    return n.kind;
}

} // namespace

FilterPresentation FilterPresentation::frechet()
{
    return FilterPresentation(std::make_shared<FilterNode>(FilterNode{Kind::Frechet, {}, {}, {}, {}, {}, {}, {}}));
}

FilterPresentation FilterPresentation::generated(std::vector<SetDescription> base)
{
    if (base.empty())
        throw PreconditionError("generated filter needs at least one base set");
    for (const auto& b : base)
        if (b.universe() != Universe::Omega)
            throw UniverseMismatch("generated filter base sets must be subsets of omega");
    SetDescription meet = SetDescription::all_of(base);
    const TailVerdict inf = is_infinite(meet);
    if (inf.is_refuted())
        throw PreconditionError("base sets are not compatible: their intersection " + to_string(meet) +
                                " is contained in [0," + std::to_string(*inf.cert().bound) + ")");
    if (inf.is_unknown())
        throw PreconditionError("cannot certify that the base intersection " + to_string(meet) + " is infinite");
    FilterNode n{Kind::Generated, std::move(base), meet, {}, {}, {}, {}, {}};
    return FilterPresentation(std::make_shared<FilterNode>(std::move(n)));
}

FilterPresentation FilterPresentation::block_density(BlockPartition partition)
{
    FilterNode n{Kind::BlockDensity, {}, {}, std::move(partition), {}, {}, {}, {}};
    return FilterPresentation(std::make_shared<FilterNode>(std::move(n)));
}

FilterPresentation FilterPresentation::summable(WeightRule w)
{
    FilterNode n{Kind::Summable, {}, {}, {}, w, {}, {}, {}};
    return FilterPresentation(std::make_shared<FilterNode>(std::move(n)));
}

FilterPresentation FilterPresentation::fubini()
{
    return FilterPresentation(std::make_shared<FilterNode>(FilterNode{Kind::FubiniFrFr, {}, {}, {}, {}, {}, {}, {}}));
}

FilterPresentation FilterPresentation::pushforward(FilterPresentation inner, BlockPartition xi)
{
    if (inner.universe() != Universe::Omega)
        throw UniverseMismatch("pushforward needs a filter on omega");
    if (inner.kind() == Kind::Frechet)
        return inner;
    FilterNode n{Kind::Pushforward, {}, {}, std::move(xi), {}, std::move(inner), {}, {}};
    return FilterPresentation(std::make_shared<FilterNode>(std::move(n)));
}

FilterPresentation FilterPresentation::restriction(FilterPresentation inner, SetDescription a)
{
    const FilterVerdict v = coideal_member(inner, a);
    if (v.is_refuted())
        throw PreconditionError("restriction to " + to_string(a) + " is improper: " + to_string(*v.cert().witness) +
                                " is a member disjoint from it");
    if (v.is_unknown())
        throw PreconditionError("cannot certify that " + to_string(a) + " is in the co-ideal: " + v.reason);
    FilterNode n{Kind::Restriction, {}, {}, {}, {}, std::move(inner), std::move(a), {}};
    return FilterPresentation(std::make_shared<FilterNode>(std::move(n)));
}

FilterPresentation FilterPresentation::induced(PointSequence seq, FilterPresentation nbhd)
{
    if (nbhd.universe() != Universe::Omega)
        throw UniverseMismatch("neighborhood filter must live on omega");
    FilterNode n{Kind::Induced, {}, {}, {}, {}, std::move(nbhd), {}, std::move(seq)};
    return FilterPresentation(std::make_shared<FilterNode>(std::move(n)));
}

FilterPresentation::Kind FilterPresentation::kind() const noexcept
{
    return kind_of(*node_);
}

Universe FilterPresentation::universe() const noexcept
{
    return node_->kind == Kind::FubiniFrFr ? Universe::OmegaSquared : Universe::Omega;
}

bool operator==(const FilterPresentation& a, const FilterPresentation& b)
{
    return a.node_ == b.node_ || *a.node_ == *b.node_;
}

// ---------------------------------------------------------------------------

namespace {

using Kind = FilterPresentation::Kind;

FilterVerdict from_tail(const TailVerdict& t, std::string method, SetDescription subject, bool cofinite,
                        bool member_when_proved)
{
    if (t.is_unknown())
        return FilterVerdict::unknown(t.horizon.value_or(0), t.reason);
    Certificate c;
    c.method = std::move(method);
    c.subject = std::move(subject);
    c.tail = t.cert();
    c.tail_cofinite = cofinite;
    const bool member = t.is_proved() == member_when_proved;
    return member ? FilterVerdict::proved(std::move(c), t.reason) : FilterVerdict::refuted(std::move(c), t.reason);
}

FilterVerdict density_member(const BlockPartition& p, const SetDescription& a)
{
    if (p.bounded()) {
        FilterVerdict v = from_tail(is_cofinite(a), "density", a, true, true);
        if (v.certificate)
            v.certificate->values["bounded_sizes"] = "true";
        return v;
    }
    const auto s = shape_of(a, p);
    if (!s)
        return FilterVerdict::unknown(0, "no closed-form block shape against the density partition");
    Certificate c;
    c.method = "density";
    c.subject = a;
    c.values["period"] = std::to_string(s->period);
    c.values["from_block"] = std::to_string(s->from_block);
    std::string limits;
    std::optional<std::uint64_t> bad;
    for (std::uint64_t r = 0; r < s->period; ++r) {
        const bool last = s->patterns[r].bits.back();
        limits += last ? '1' : '0';
        if (!last && !bad)
            bad = r;
    }
    c.values["limits"] = limits;
    if (bad) {
        c.values["residue"] = std::to_string(*bad);
        return FilterVerdict::refuted(std::move(c), "block density tends to 0 along a residue class");
    }
    return FilterVerdict::proved(std::move(c), "block density tends to 1");
}

FilterVerdict summable_member(WeightRule w, const SetDescription& a)
{
    const SetDescription comp = ~a;
    const auto an = analyze_series(w, comp);
    if (!an)
        return FilterVerdict::unknown(0, "no closed form for the complement's weight");
    Certificate c;
    c.method = "summable";
    c.subject = comp;
    c.values = an->values;
    c.values["weight"] = to_string(w);
    c.values["argument"] = an->argument;
    if (an->converges)
        return FilterVerdict::proved(std::move(c), "complement has finite weight");
    return FilterVerdict::refuted(std::move(c), "complement has infinite weight");
}

// Row n of a subset of omega x omega: the value it takes for all large columns,
// once n is past every leaf's from_row.
bool eventual_row_value(const SetDescription& a)
{
    switch (a.kind()) {
    case SetDescription::Kind::PairedRows: return !data_as<PairedRowsData>(a).hi.has_value();
    case SetDescription::Kind::And:
        for (const auto& p : data_as<BoolData>(a).args)
            if (!eventual_row_value(p))
                return false;
        return true;
    case SetDescription::Kind::Or:
        for (const auto& p : data_as<BoolData>(a).args)
            if (eventual_row_value(p))
                return true;
        return false;
    case SetDescription::Kind::Not: return !eventual_row_value(data_as<BoolData>(a).args.front());
    default: throw UniverseMismatch("unexpected kind in a subset of omega x omega");
    }
}

void collect_rows(const SetDescription& a, std::vector<PairedRowsData>& out)
{
    if (a.kind() == SetDescription::Kind::PairedRows) {
        out.push_back(data_as<PairedRowsData>(a));
        return;
    }
    for (const auto& p : data_as<BoolData>(a).args)
        collect_rows(p, out);
}

} // namespace

/// Row from which the eventual value holds, and the column past which it holds in row n.
std::uint64_t fubini_row_bound(const SetDescription& a);
std::uint64_t fubini_column_bound(const SetDescription& a, std::uint64_t row);

std::uint64_t fubini_row_bound(const SetDescription& a)
{
    std::vector<PairedRowsData> rows;
    collect_rows(a, rows);
    std::uint64_t r = 0;
    for (const auto& d : rows)
        r = std::max(r, d.from_row);
    return r;
}

std::uint64_t fubini_column_bound(const SetDescription& a, std::uint64_t row)
{
    std::vector<PairedRowsData> rows;
    collect_rows(a, rows);
    std::uint64_t c = 0;
    for (const auto& d : rows) {
        c = std::max(c, d.lo.at(row));
        if (d.hi)
            c = std::max(c, d.hi->at(row));
    }
    return c;
}

namespace {

FilterVerdict fubini_member(const SetDescription& a)
{
    const bool val = eventual_row_value(a);
    Certificate c;
    c.method = "fubini";
    c.subject = a;
    c.values["row_bound"] = std::to_string(fubini_row_bound(a));
    c.values["rows_cofinite"] = val ? "true" : "false";
    if (val)
        return FilterVerdict::proved(std::move(c), "every row from the bound on is cofinite");
    return FilterVerdict::refuted(std::move(c), "every row from the bound on is finite");
}

Certificate wrap(std::string method, const Certificate& inner, SetDescription subject)
{
    Certificate c;
    c.method = std::move(method);
    c.subject = std::move(subject);
    c.parts.push_back(inner);
    return c;
}

FilterVerdict rewrap(const FilterVerdict& v, const std::string& method, const SetDescription& subject)
{
    return map_verdict<Certificate>(v, [&](const Certificate& c) { return wrap(method, c, subject); });
}

SetDescription complement_simplified(const SetDescription& a)
{
    if (a.kind() == SetDescription::Kind::PairedRows) {
        const auto& d = data_as<PairedRowsData>(a);
        if (d.from_row == 0 && d.lo == Affine{0, 0} && d.hi)
            return SetDescription::paired_rows(0, *d.hi, std::nullopt);
    }
    if (a.kind() == SetDescription::Kind::Not)
        return data_as<BoolData>(a).args.front();
    return ~a;
}

} // namespace

FilterVerdict filter_member(const FilterPresentation& f, const SetDescription& a)
{
    if (a.universe() != f.universe())
        throw UniverseMismatch("set " + to_string(a) + " does not live on the filter's index set");
    const FilterNode& n = f.node();
    switch (f.kind()) {
    case Kind::Frechet: return from_tail(is_cofinite(a), "cofinite", a, true, true);
    case Kind::Generated: {
        const SetDescription gap = *n.intersection & ~a;
        FilterVerdict v = from_tail(is_finite(gap), "generated", gap, false, true);
        if (v.certificate)
            v.certificate->witness = *n.intersection;
        return v;
    }
    case Kind::BlockDensity: return density_member(*n.partition, a);
    case Kind::Summable: return summable_member(n.weight, a);
    case Kind::FubiniFrFr: return fubini_member(a);
    case Kind::Pushforward: {
        const SetDescription pre = SetDescription::lift(*n.partition, a);
        return rewrap(filter_member(*n.inner, pre), "pushforward", pre);
    }
    case Kind::Restriction: {
        const SetDescription widened = a | ~*n.restrict_to;
        return rewrap(filter_member(*n.inner, widened), "restriction", widened);
    }
    case Kind::Induced: {
        const PointSequence& s = *n.sequence;
        if (!s.identity_tail())
            return FilterVerdict::unknown(0, "induced filter is decided only for sequences with x_k = k eventually");
        return rewrap(filter_member(*n.inner, a), "induced", a);
    }
    }
    return FilterVerdict::unknown(0, "unsupported filter");
}

FilterVerdict coideal_member(const FilterPresentation& f, const SetDescription& a)
{
    const SetDescription comp = complement_simplified(a);
    const FilterVerdict v = filter_member(f, comp);
    FilterVerdict out = v;
    if (v.is_unknown())
        return out;
    out.status = v.is_proved() ? Status::Refuted : Status::Proved;
    out.certificate->witness = comp;
    out.certificate->values["coideal"] = "true";
    return out;
}

FilterVerdict is_proper(const FilterPresentation& f)
{
    const SetDescription none = f.universe() == Universe::Omega
                                    ? SetDescription::empty()
                                    : SetDescription::paired_rows(0, Affine{0, 0}, Affine{0, 0});
    FilterVerdict v = filter_member(f, none);
    if (v.is_unknown())
        return v;
    v.status = v.is_proved() ? Status::Refuted : Status::Proved;
    return v;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kVerifySamples = 2048;

bool verify_member(const FilterPresentation& f, const SetDescription& a, const FilterVerdict& v);

bool verify_tail_cert(const Certificate& c, Status status, bool member_when_proved)
{
    if (!c.subject || !c.tail)
        return false;
    TailVerdict t;
    t.certificate = c.tail;
    const bool member = status == Status::Proved;
    const bool tail_proved = member == member_when_proved;
    t.status = tail_proved ? Status::Proved : Status::Refuted;
    return verify_tail(*c.subject, t, c.tail_cofinite, kVerifySamples);
}

bool verify_density(const BlockPartition& p, const SetDescription& a, const FilterVerdict& v)
{
    const Certificate& c = v.cert();
    if (c.values.count("bounded_sizes"))
        return p.bounded() && verify_tail_cert(c, v.status, true);
    const auto s = shape_of(a, p);
    if (!s || c.values.at("period") != std::to_string(s->period))
        return false;
    // The stored limits must match the observed block counts on sampled blocks.
    const std::string& limits = c.values.at("limits");
    if (limits.size() != s->period)
        return false;
    const std::uint64_t from = std::stoull(c.values.at("from_block"));
    std::uint64_t budget = std::uint64_t{1} << 18;
    for (std::uint64_t m = from; m < from + 64 && m <= p.max_block(); ++m) {
        const std::uint64_t size = p.size(m);
        if (size > budget)
            break;
        budget -= size;
        if (block_count(a, p, m) != s->at_block(m).count_below(size))
            return false;
    }
    const bool all_one = limits.find('0') == std::string::npos;
    return all_one == v.is_proved();
}

bool verify_summable(WeightRule w, const SetDescription& a, const FilterVerdict& v)
{
    const Certificate& c = v.cert();
    if (!c.subject || !(*c.subject == ~a))
        return false;
    const SetDescription& comp = *c.subject;
    if (w == WeightRule::Geometric)
        return v.is_proved();
    if (w == WeightRule::Counting) {
        const TailVerdict t = is_finite(comp);
        return t.is_proved() == v.is_proved() && verify_tail(comp, t, false, kVerifySamples);
    }
    if (v.is_refuted()) {
        if (!c.values.count("partial_sum"))
            return true; // structural argument only
        const std::uint64_t split = std::stoull(c.values.at("split"));
        return partial_weight(w, comp, 0, split) > std::stold(c.values.at("threshold"));
    }
    if (!c.values.count("split"))
        return false;
    const std::uint64_t split = std::stoull(c.values.at("split"));
    const long double ps = partial_weight(w, comp, 0, split);
    if (std::fabs(ps - std::stold(c.values.at("partial_sum"))) > 1e-9L)
        return false;
    if (c.values.count("points_per_block")) {
        const BlockPartition p = parse_partition(c.values.at("partition"));
        const std::uint64_t k = std::stoull(c.values.at("points_per_block"));
        const std::uint64_t m0 = std::stoull(c.values.at("split_block"));
        std::uint64_t budget = std::uint64_t{1} << 18;
        for (std::uint64_t m = m0; m < m0 + 64 && m <= p.max_block(); ++m) {
            if (p.size(m) > budget)
                break;
            budget -= p.size(m);
            if (block_count(comp, p, m) > k)
                return false;
        }
    }
    return std::isfinite(std::stold(c.values.at("tail_bound")));
}

bool verify_fubini(const SetDescription& a, const FilterVerdict& v)
{
    const Certificate& c = v.cert();
    const std::uint64_t r0 = std::stoull(c.values.at("row_bound"));
    const bool val = c.values.at("rows_cofinite") == "true";
    if (val != v.is_proved())
        return false;
    for (std::uint64_t r = r0; r < r0 + 48; ++r) {
        const std::uint64_t c0 = fubini_column_bound(a, r);
        for (std::uint64_t k = 0; k < 48; ++k)
            if (member_pair(a, r, c0 + k * k) != val)
                return false;
    }
    return true;
}

bool verify_member(const FilterPresentation& f, const SetDescription& a, const FilterVerdict& v)
{
    if (v.is_unknown())
        return !v.certificate;
    if (!v.certificate)
        return false;
    const FilterNode& n = f.node();
    const Certificate& c = v.cert();
    switch (f.kind()) {
    case Kind::Frechet: return c.subject && *c.subject == a && verify_tail_cert(c, v.status, true);
    case Kind::Generated:
        return c.subject && *c.subject == (*n.intersection & ~a) && verify_tail_cert(c, v.status, true);
    case Kind::BlockDensity: return verify_density(*n.partition, a, v);
    case Kind::Summable: return verify_summable(n.weight, a, v);
    case Kind::FubiniFrFr: return verify_fubini(a, v);
    case Kind::Pushforward:
    case Kind::Restriction:
    case Kind::Induced: {
        if (c.parts.size() != 1 || !c.subject)
            return false;
        FilterVerdict inner = v;
        inner.certificate = c.parts.front();
        return verify_member(*n.inner, *c.subject, inner);
    }
    }
    return false;
}

} // namespace

bool verify_filter_verdict(const FilterPresentation& f, const SetDescription& a, const FilterVerdict& v, bool coideal)
{
    if (!coideal)
        return verify_member(f, a, v);
    if (v.is_unknown())
        return !v.certificate;
    if (!v.certificate || !v.cert().witness)
        return false;
    const SetDescription& comp = *v.cert().witness;
    // The witness must be the complement of A pointwise.
    for (std::uint64_t x = 0; x < kVerifySamples; ++x)
        if (member(comp, x) == member(a, x))
            return false;
    FilterVerdict flipped = v;
    flipped.status = v.is_proved() ? Status::Refuted : Status::Proved;
    flipped.certificate->values.erase("coideal");
    flipped.certificate->witness = v.cert().witness;
    if (f.kind() == Kind::Generated)
        flipped.certificate->witness = *f.node().intersection;
    return verify_member(f, comp, flipped);
}

// ---------------------------------------------------------------------------

std::optional<SetDescription> canonical_generator(const FilterPresentation& f, std::uint64_t i)
{
    const FilterNode& n = f.node();
    const SetDescription tail = SetDescription::interval(i, std::nullopt);
    switch (f.kind()) {
    case Kind::Frechet: return tail;
    case Kind::Generated: return *n.intersection & tail;
    case Kind::BlockDensity: return SetDescription::block_rule(*n.partition, Selector::all_but_first(i));
    case Kind::Summable:
        switch (n.weight) {
        case WeightRule::Counting: return tail;
        case WeightRule::Harmonic:
            return tail & ~SetDescription::block_rule(BlockPartition::linear(1), Selector::first(1));
        case WeightRule::Geometric: return std::nullopt;
        }
        return std::nullopt;
    case Kind::FubiniFrFr:
        return SetDescription::paired_rows(i, Affine{0, static_cast<std::int64_t>(i)}, std::nullopt);
    case Kind::Restriction: {
        auto g = canonical_generator(*n.inner, i);
        if (!g)
            return std::nullopt;
        return *g & *n.restrict_to;
    }
    case Kind::Induced:
        if (!n.sequence->identity_tail())
            return std::nullopt;
        return canonical_generator(*n.inner, i);
    case Kind::Pushforward: return std::nullopt;
    }
    return std::nullopt;
}

namespace {

constexpr std::uint64_t kHitTable = 64;

// Length L such that every interval of length L starting at or after `start`
// meets G, for an eventually periodic G.
std::optional<std::pair<std::uint64_t, std::uint64_t>> periodic_gap(const SetDescription& g)
{
    const auto pp = position_period(g);
    if (!pp)
        return std::nullopt;
    std::vector<std::uint64_t> pts;
    for (std::uint64_t x = pp->start; x < pp->start + pp->period; ++x)
        if (member(g, x))
            pts.push_back(x);
    if (pts.empty())
        return std::nullopt;
    std::uint64_t gap = pts.front() + pp->period - pts.back();
    for (std::size_t k = 1; k < pts.size(); ++k)
        gap = std::max(gap, pts[k] - pts[k - 1]);
    return std::make_pair(pp->start, gap);
}

struct TailPlan {
    enum class Kind { Constant, Partition, Power4 } kind;
    std::uint64_t ready_at = 0; // greedy must reach this position first
    std::uint64_t length = 1;   // Constant
    BlockPartition partition;   // Partition
    std::uint64_t offset = 0;   // Partition: realized offset hit in every block
    std::string reason;
};

std::optional<TailPlan> plan_tail(const FilterPresentation& f, const SetDescription& g0)
{
    if (f.kind() == Kind::Summable && f.node().weight == WeightRule::Harmonic) {
        TailPlan t{TailPlan::Kind::Power4, 2, 1, {}, 0,
                   "blocks [s, 4s) have harmonic weight above 1 and contain a non-triangular point"};
        return t;
    }
    if (auto pg = periodic_gap(g0)) {
        TailPlan t{TailPlan::Kind::Constant, pg->first, pg->second, {}, 0,
                   "generator is periodic from " + std::to_string(pg->first) + " with maximal gap " +
                       std::to_string(pg->second)};
        return t;
    }
    for (const auto& p : mentioned_partitions(g0)) {
        const auto s = shape_of(g0, p);
        if (!s || s->period != 1)
            continue;
        const OffsetPattern& pat = s->patterns.front();
        for (std::size_t i = 0; i < pat.cuts.size(); ++i) {
            if (!pat.bits[i])
                continue;
            const std::uint64_t off = pat.cuts[i];
            std::uint64_t m = std::max(s->from_block, p.regular_from());
            while (m <= p.max_block() && p.size(m) <= off)
                ++m;
            if (m > p.max_block())
                continue;
            TailPlan t{TailPlan::Kind::Partition, 0, 1, p, off,
                       "generator meets offset " + std::to_string(off) + " of every block of " + to_string(p) +
                           " from block " + std::to_string(m)};
            t.ready_at = p.start(m);
            return t;
        }
    }
    return std::nullopt;
}

} // namespace

MeagernessVerdict find_meagerness_witness(const FilterPresentation& f, std::uint64_t horizon,
                                          std::uint64_t min_intervals)
{
    if (f.universe() != Universe::Omega)
        return MeagernessVerdict::unknown(horizon, "interval witnesses are built for filters on omega");
    if (f.kind() == Kind::BlockDensity) {
        const BlockPartition& p = *f.node().partition;
        if (p.bounded())
            return MeagernessVerdict::unknown(horizon, "density over bounded blocks is the Frechet filter; use frechet");
        MeagernessWitness w{p, 0, {}, horizon, "a set of block density tending to 1 meets all but finitely many blocks"};
        for (std::uint64_t i = 0; i < kHitTable; ++i) {
            std::uint64_t m = 0;
            while (p.size(m) <= i)
                ++m;
            w.hit_from.push_back(m);
        }
        return MeagernessVerdict::proved(std::move(w), w.tail_reason);
    }
    const auto g0 = canonical_generator(f, 0);
    if (!g0)
        return MeagernessVerdict::unknown(horizon, "filter has no canonical generator enumeration");
    const auto plan = plan_tail(f, *g0);
    if (!plan)
        return MeagernessVerdict::unknown(horizon, "no closed-form tail rule for the generators");
    const bool harmonic = plan->kind == TailPlan::Kind::Power4;

    std::vector<std::uint64_t> lengths;
    std::vector<SetDescription> gens;
    std::uint64_t left = 0;
    while (lengths.size() < min_intervals || left < plan->ready_at) {
        const std::uint64_t j = lengths.size();
        gens.push_back(*canonical_generator(f, j));
        std::uint64_t right = left + 1;
        for (const auto& g : gens) {
            const auto y = next_member(g, left, horizon);
            if (!y)
                return MeagernessVerdict::unknown(horizon, "interval " + std::to_string(j) + " cannot close below the horizon");
            right = std::max(right, *y + 1);
        }
        if (harmonic) {
            long double wsum = partial_weight(WeightRule::Harmonic, SetDescription::omega(), left, right);
            while (wsum <= 1.0L && right < horizon) {
                wsum += weight_of(WeightRule::Harmonic, right);
                ++right;
            }
            if (wsum <= 1.0L)
                return MeagernessVerdict::unknown(horizon, "interval weight cannot exceed 1 below the horizon");
        }
        if (right > horizon)
            return MeagernessVerdict::unknown(horizon, "interval " + std::to_string(j) + " cannot close below the horizon");
        lengths.push_back(right - left);
        left = right;
    }

    BlockPartition partition;
    switch (plan->kind) {
    case TailPlan::Kind::Constant:
        partition = BlockPartition(lengths, TailRule{TailRule::Kind::Constant, static_cast<std::int64_t>(plan->length), 2});
        break;
    case TailPlan::Kind::Power4: {
        // First tail block J = lengths.size() starting at `left` gets size 4^(J+c) >= 3 * left.
        const std::int64_t j = static_cast<std::int64_t>(lengths.size());
        std::int64_t e = 0;
        long double sz = 1;
        while (sz < 3.0L * static_cast<long double>(left)) {
            sz *= 4;
            ++e;
        }
        partition = BlockPartition(lengths, TailRule{TailRule::Kind::Power, e - j, 4});
        break;
    }
    case TailPlan::Kind::Partition: {
        const BlockPartition& p = plan->partition;
        std::uint64_t m = p.block_of(left);
        if (p.start(m) < left || p.size(m) <= plan->offset || p.start(m) + plan->offset < left)
            ++m;
        while (p.size(m) <= plan->offset)
            ++m;
        // Bridge [left, end(m)) absorbs the partial block; it contains block m's hit point.
        std::vector<std::uint64_t> pre = lengths;
        pre.push_back(p.end(m) - left);
        partition = p.suffix_from(m + 1).with_prefix(pre);
        break;
    }
    }
    MeagernessWitness w{partition, 0, {}, horizon, plan->reason};
    for (std::uint64_t i = 0; i < std::max<std::uint64_t>(kHitTable, lengths.size()); ++i)
        w.hit_from.push_back(i);
    return MeagernessVerdict::proved(std::move(w), plan->reason);
}

bool verify_meagerness_witness(const FilterPresentation& f, const MeagernessWitness& w)
{
    const BlockPartition& p = w.partition;
    for (std::uint64_t i = 0; i < w.hit_from.size(); ++i) {
        const auto g = canonical_generator(f, i);
        if (!g)
            return false;
        for (std::uint64_t m = w.hit_from[i]; m <= p.max_block() && p.end(m) <= w.horizon; ++m)
            if (block_count(*g, p, m) == 0)
                return false;
    }
    return true;
}

} // namespace filterlab
