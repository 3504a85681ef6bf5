#include "filterlab/pseudo.hpp"

#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/shape.hpp"
#include "filterlab/weights.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace filterlab {

namespace {

constexpr std::uint64_t kProfileCap = std::uint64_t{1} << 20;
constexpr std::size_t kMissedListed = 8;

// {i in J : keep(|S cap block i|)} for a bounded partition, as a finite part
// below `from` and residues mod `period` from `from` on.
struct Profile {
    std::uint64_t from = 0;
    std::uint64_t period = 1;
    std::vector<std::uint64_t> early;
    std::vector<std::uint64_t> residues;
    std::uint64_t max_count = 0; // over blocks of J

    bool infinite() const noexcept { return !residues.empty(); }

    SetDescription set() const
    {
        SetDescription tail = SetDescription::interval(from, std::nullopt) &
                              SetDescription::block_rule(BlockPartition::constant(1), Selector::all(), period, residues);
        if (early.empty())
            return tail;
        return SetDescription::finite(early) | tail;
    }

    // First few members, for diagnostics.
    std::vector<std::uint64_t> first(std::size_t count) const
    {
        std::vector<std::uint64_t> out(early.begin(), early.begin() + std::min(count, early.size()));
        for (std::uint64_t base = from; out.size() < count && infinite(); base += period)
            for (const std::uint64_t r : residues) {
                const std::uint64_t i = base - base % period + r;
                if (i >= base && out.size() < count)
                    out.push_back(i);
            }
        return out;
    }
};

std::optional<Profile> profile(const BlockPartition& p, const SetDescription& s, const SetDescription& j,
                               const std::function<bool(std::uint64_t)>& keep)
{
    const auto ps = position_period(s);
    const auto pj = position_period(j);
    if (!ps || !pj)
        return std::nullopt;
    const std::uint64_t c = p.eventual_size();
    const std::uint64_t i0 = std::max(p.regular_from(), first_block_at_or_after(p, ps->start));
    const std::uint64_t q = ps->period / std::gcd(ps->period, c);
    const std::uint64_t period = lcm_capped(q, pj->period, kProfileCap);
    if (period == 0)
        return std::nullopt;
    Profile out;
    out.from = std::max(i0, pj->start);
    out.period = period;
    if (out.from > kProfileCap)
        return std::nullopt;
    for (std::uint64_t i = 0; i < out.from + period; ++i) {
        if (!member(j, i))
            continue;
        const std::uint64_t n = block_count(s, p, i);
        out.max_count = std::max(out.max_count, n);
        if (!keep(n))
            continue;
        if (i < out.from)
            out.early.push_back(i);
        else
            out.residues.push_back(i % period);
    }
    std::sort(out.residues.begin(), out.residues.end());
    return out;
}

SetDescription meet_with(const SetDescription& carrier, const std::vector<SetDescription>& gens)
{
    std::vector<SetDescription> parts{carrier};
    parts.insert(parts.end(), gens.begin(), gens.end());
    return SetDescription::all_of(std::move(parts));
}

Lemma1Result unknown(Lemma1Result r, std::string why)
{
    r.status = Status::Unknown;
    r.reason = std::move(why);
    return r;
}

} // namespace

Lemma1Result lemma1_pseudointersection(const BoundedBlockInstance& inst)
{
    const BlockPartition& p = inst.partition;
    if (!p.bounded())
        throw PreconditionError("bounded-block instances need a partition with bounded sizes");
    for (const auto& g : inst.generators)
        if (g.universe() != Universe::Omega)
            throw UniverseMismatch("generators must be subsets of omega");
    Lemma1Result out;

    const auto blocks = profile(p, inst.carrier, inst.index_set, [](std::uint64_t n) { return n == 0; });
    if (!blocks)
        return unknown(out, "carrier or index set is not eventually periodic");
    if (!blocks->early.empty() || blocks->infinite()) {
        out.status = Status::Refuted;
        out.missed_blocks = blocks->first(kMissedListed);
        out.reason = "some blocks C_i are empty";
        return out;
    }
    const auto all = profile(p, meet_with(inst.carrier, inst.generators), inst.index_set,
                             [](std::uint64_t n) { return n == 0; });
    if (!all)
        return unknown(out, "generator intersection is not eventually periodic");
    if (all->infinite()) {
        out.status = Status::Refuted;
        out.reason = "the generators' intersection misses infinitely many blocks";
        out.missed_blocks = all->first(kMissedListed);
        for (std::size_t g = 0; g < inst.generators.size() && out.violating.empty(); ++g) {
            const auto one = profile(p, inst.carrier & inst.generators[g], inst.index_set,
                                     [](std::uint64_t n) { return n == 0; });
            if (one && one->infinite()) {
                out.violating = {g};
                out.missed_blocks = one->first(kMissedListed);
            }
        }
        if (out.violating.empty()) {
            out.violating.resize(inst.generators.size());
            std::iota(out.violating.begin(), out.violating.end(), std::size_t{0});
        }
        return out;
    }

    SetDescription carrier = inst.carrier;
    SetDescription index_set = inst.index_set;
    std::uint64_t n = blocks->max_count;
    for (;;) {
        Lemma1Step step{n, std::nullopt, index_set, carrier};
        if (n > 1) {
            for (std::size_t g = 0; g < inst.generators.size(); ++g) {
                const std::uint64_t bound = n;
                const auto bad = profile(p, carrier & inst.generators[g], index_set,
                                         [bound](std::uint64_t c) { return c > 0 && c < bound; });
                if (!bad)
                    return unknown(out, "restricted generator is not eventually periodic");
                if (bad->infinite()) {
                    step.chosen = g;
                    out.trace.push_back(step);
                    index_set = bad->set();
                    carrier = carrier & inst.generators[g];
                    --n;
                    break;
                }
            }
            if (step.chosen)
                continue;
        }
        out.trace.push_back(step);
        break;
    }

    PseudointersectionCertificate cert;
    cert.a = SetDescription::lift(p, index_set) & carrier;
    const auto live = profile(p, carrier, index_set, [](std::uint64_t c) { return c > 0; });
    if (!live || !live->infinite())
        return unknown(out, "final index set has no periodic description");
    // Blocks in one residue class mod the profile period have the same contents.
    const std::uint64_t r = live->residues.front();
    std::uint64_t m = live->from - live->from % live->period + r;
    if (m < live->from)
        m += live->period;
    const std::uint64_t off = *next_member(carrier, p.start(m), p.end(m)) - p.start(m);
    cert.infinite.scheme = Scheme{p, live->period, r, m, off};

    for (const auto& g : inst.generators) {
        const std::uint64_t bound = n;
        const auto exc = profile(p, carrier & g, index_set, [bound](std::uint64_t c) { return c < bound; });
        if (!exc || exc->infinite())
            return unknown(out, "exception set of a generator is not finite in closed form");
        std::vector<std::uint64_t> pts;
        for (const std::uint64_t i : exc->early)
            for (std::uint64_t x = p.start(i); x < p.end(i); ++x)
                if (member(carrier, x) && !member(g, x))
                    pts.push_back(x);
        cert.exceptions.push_back(std::move(pts));
    }
    out.status = Status::Proved;
    out.certificate = std::move(cert);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// A is B, or an intersection with B among its conjuncts.
bool syntactic_subset(const SetDescription& a, const SetDescription& b)
{
    if (a == b)
        return true;
    if (a.kind() != SetDescription::Kind::And)
        return false;
    for (const auto& x : data_as<BoolData>(a).args)
        if (syntactic_subset(x, b))
            return true;
    return false;
}

} // namespace

LafResult laf_pseudointersection(WeightRule w, const std::vector<SetDescription>& chain, std::uint64_t horizon)
{
    if (chain.empty())
        throw PreconditionError("chain must have at least one set");
    const FilterPresentation f = FilterPresentation::summable(w);
    LafResult out;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const FilterVerdict member = filter_member(f, chain[k]);
        // Members of a proper filter have infinite weight.
        if (!member.is_proved() || !is_proper(f).is_proved()) {
            const FilterVerdict plus = coideal_member(f, chain[k]);
            if (!plus.is_proved())
                throw PreconditionError("link " + std::to_string(k) + " does not have infinite weight: " + plus.reason);
        }
        out.in_filter.push_back(member.status);
        if (k == 0)
            continue;
        if (syntactic_subset(chain[k], chain[k - 1]))
            continue;
        const TailVerdict inc = is_finite(chain[k] & ~chain[k - 1]);
        if (!inc.is_proved() || count_range(chain[k] & ~chain[k - 1], 0, *inc.cert().bound) != 0)
            throw PreconditionError("chain is not decreasing at link " + std::to_string(k));
    }
    // Sums are long double; requiring a margin keeps "weight > k" sound.
    constexpr long double kMargin = 1e-9L;
    const std::size_t last = chain.size() - 1;
    std::uint64_t lo = 0;
    for (std::uint64_t k = 0; k <= last; ++k) {
        const SetDescription& a = chain[k];
        long double sum = 0;
        std::uint64_t x = lo;
        while (sum <= static_cast<long double>(k) + kMargin) {
            const auto y = next_member(a, x, horizon);
            if (!y) {
                out.status = Status::Unknown;
                out.reason = "segment " + std::to_string(k) + " does not close below the horizon";
                return out;
            }
            sum += weight_of(w, *y);
            x = *y + 1;
        }
        out.segments.push_back({k, lo, x, sum});
        lo = x;
    }
    std::vector<SetDescription> pieces;
    for (std::size_t k = 0; k < last; ++k)
        pieces.push_back(SetDescription::interval(out.segments[k].lo, out.segments[k].hi) & chain[k]);
    pieces.push_back(SetDescription::interval(out.segments[last].lo, std::nullopt) & chain[last]);
    PseudointersectionCertificate cert;
    cert.a = SetDescription::any_of(std::move(pieces));
    TailVerdict inf = is_infinite(cert.a);
    if (!inf.is_proved())
        inf = is_infinite(SetDescription::interval(out.segments[last].lo, std::nullopt) & chain[last]);
    if (!inf.is_proved() || !inf.cert().scheme) {
        out.status = Status::Unknown;
        out.reason = "no closed-form scheme for the constructed set";
        return out;
    }
    cert.infinite = inf.cert();
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const std::uint64_t nk = out.segments[k].lo;
        cert.exceptions.push_back(members_below(cert.a & ~chain[k], nk));
    }
    out.status = Status::Proved;
    out.certificate = std::move(cert);
    out.reason = "segment k carries weight above k";
    return out;
}

// ---------------------------------------------------------------------------

SetDescription fubini_chain_link(std::uint64_t k)
{
    return SetDescription::paired_rows(k, Affine{0, 0}, std::nullopt);
}

namespace {

void collect_leaves(const SetDescription& a, std::vector<PairedRowsData>& out)
{
    if (a.kind() == SetDescription::Kind::PairedRows) {
        out.push_back(data_as<PairedRowsData>(a));
        return;
    }
    if (a.kind() != SetDescription::Kind::And && a.kind() != SetDescription::Kind::Or &&
        a.kind() != SetDescription::Kind::Not)
        throw UniverseMismatch("unexpected kind in a subset of omega x omega");
    for (const auto& p : data_as<BoolData>(a).args)
        collect_leaves(p, out);
}

// Whether row n is infinite: leaves inactive at n are empty rows.
bool row_infinite(const SetDescription& a, std::uint64_t n)
{
    switch (a.kind()) {
    case SetDescription::Kind::PairedRows: {
        const auto& d = data_as<PairedRowsData>(a);
        return n >= d.from_row && !d.hi;
    }
    case SetDescription::Kind::And:
        return std::all_of(data_as<BoolData>(a).args.begin(), data_as<BoolData>(a).args.end(),
                           [n](const SetDescription& p) { return row_infinite(p, n); });
    case SetDescription::Kind::Or:
        return std::any_of(data_as<BoolData>(a).args.begin(), data_as<BoolData>(a).args.end(),
                           [n](const SetDescription& p) { return row_infinite(p, n); });
    case SetDescription::Kind::Not: return !row_infinite(data_as<BoolData>(a).args.front(), n);
    default: throw UniverseMismatch("unexpected kind in a subset of omega x omega");
    }
}

// Every breakpoint lo(n), hi(n) of every leaf is below bound(n).
Affine breakpoint_bound(const std::vector<PairedRowsData>& leaves)
{
    Affine b{0, 0};
    auto add = [&b](const Affine& a) {
        b.slope += std::max<std::int64_t>(a.slope, 0);
        b.offset += std::max<std::int64_t>(a.offset, 0);
    };
    for (const auto& d : leaves) {
        add(d.lo);
        if (d.hi)
            add(*d.hi);
    }
    return b;
}

// Row past which the relative order of all breakpoints no longer changes.
std::uint64_t order_stable_row(const std::vector<PairedRowsData>& leaves)
{
    std::vector<Affine> fs;
    for (const auto& d : leaves) {
        fs.push_back(d.lo);
        if (d.hi)
            fs.push_back(*d.hi);
    }
    fs.push_back(Affine{0, 0});
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
            const std::int64_t ds = fs[i].slope - fs[j].slope;
            const std::int64_t dof = fs[j].offset - fs[i].offset;
            if (ds == 0)
                continue;
            const std::int64_t cross = dof / ds;
            if (cross >= 0)
                r = std::max<std::uint64_t>(r, static_cast<std::uint64_t>(cross) + 2);
        }
    return r;
}

bool row_nonempty(const SetDescription& a, std::uint64_t n, std::uint64_t cols)
{
    for (std::uint64_t m = 0; m < cols; ++m)
        if (member_pair(a, n, m))
            return true;
    return false;
}

} // namespace

FubiniRefutation fubini_refute(const SetDescription& d)
{
    if (d.universe() != Universe::OmegaSquared)
        throw UniverseMismatch("candidate must be a subset of omega x omega");
    std::vector<PairedRowsData> leaves;
    collect_leaves(d, leaves);
    FubiniRefutation out;
    std::uint64_t r = 0;
    for (const auto& l : leaves)
        r = std::max(r, l.from_row);
    out.row_bound = r;
    for (std::uint64_t n = 0; n <= r; ++n)
        if (row_infinite(d, n)) {
            out.status = Status::Refuted;
            out.violated_k = n + 1;
            out.reason = "row " + std::to_string(n) + " is infinite, so D \\ A_" + std::to_string(n + 1) +
                         " is infinite";
            return out;
        }
    const Affine bound = breakpoint_bound(leaves);
    const std::uint64_t stable = std::max(order_stable_row(leaves), r);
    if (!row_nonempty(d, stable, bound.at(stable) + 1)) {
        out.status = Status::Refuted;
        out.reason = "D is finite: every row from " + std::to_string(stable) + " on is empty";
        return out;
    }
    Affine cut = bound;
    if (d.kind() == SetDescription::Kind::PairedRows && data_as<PairedRowsData>(d).hi)
        cut = *data_as<PairedRowsData>(d).hi;
    out.blocking = SetDescription::paired_rows(0, cut, std::nullopt);
    out.blocking_member = filter_member(FilterPresentation::fubini(), *out.blocking);
    out.status = out.blocking_member->is_proved() ? Status::Proved : Status::Unknown;
    out.reason = "every row of D is finite; B keeps the columns past each row's maximum";
    return out;
}

bool verify_fubini_refutation(const SetDescription& d, const FubiniRefutation& r, std::uint64_t horizon)
{
    if (r.status != Status::Proved)
        return true;
    if (!r.blocking || !r.blocking_member)
        return false;
    const FilterPresentation f = FilterPresentation::fubini();
    if (!r.blocking_member->is_proved() || !verify_filter_verdict(f, *r.blocking, *r.blocking_member))
        return false;
    std::uint64_t side = 1;
    while (side * side < horizon)
        ++side;
    for (std::uint64_t n = 0; n < side; ++n)
        for (std::uint64_t m = 0; m < side; ++m)
            if (member_pair(d, n, m) && member_pair(*r.blocking, n, m))
                return false;
    for (std::uint64_t n = r.row_bound; n < r.row_bound + 8; ++n)
        if (row_infinite(d, n))
            return false;
    return true;
}

// ---------------------------------------------------------------------------

Verdict<PseudoCheck> verify_pseudointersection(const PseudointersectionCertificate& cert,
                                               const std::vector<SetDescription>& generators,
                                               std::uint64_t horizon, std::uint64_t min_count)
{
    using V = Verdict<PseudoCheck>;
    if (cert.exceptions.size() != generators.size())
        return V::refuted({std::nullopt, std::nullopt, "one exception set per generator is required"});
    if (count_range(cert.a, 0, horizon) < min_count)
        return V::refuted({std::nullopt, std::nullopt, "fewer members below the horizon than required"});
    TailVerdict inf;
    inf.status = Status::Refuted;
    inf.certificate = cert.infinite;
    if (!cert.infinite.scheme || !verify_tail(cert.a, inf, false))
        return V::refuted({std::nullopt, std::nullopt, "infinitude scheme does not lie inside A"});
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const TailVerdict sub = almost_subset(cert.a, generators[g]);
        if (sub.is_refuted()) {
            std::optional<std::uint64_t> pt;
            if (sub.cert().scheme)
                pt = sub.cert().scheme->point(0);
            return V::refuted({g, pt, "exceptions are infinite"});
        }
        const auto& exc = cert.exceptions[g];
        for (std::uint64_t x = 0; x < horizon; ++x) {
            const bool is_exc = member(cert.a, x) && !member(generators[g], x);
            const bool declared = std::binary_search(exc.begin(), exc.end(), x);
            if (is_exc != declared)
                return V::refuted({g, x, is_exc ? "exception missing from the declared set"
                                                : "declared exception is not in A \\ G"});
        }
    }
    return V::proved({std::nullopt, std::nullopt, "infinite and almost contained in every generator"});
}

} // namespace filterlab
