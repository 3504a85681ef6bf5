#include "filterlab/convergence.hpp"

#include "filterlab/decide.hpp"
#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"

#include <algorithm>

namespace filterlab {

SetDescription INetwork::at(std::uint64_t i) const
{
    if (generated_by) {
        auto g = canonical_generator(*generated_by, i);
        if (!g)
            throw PreconditionError("filter " + to_string(*generated_by) + " has no canonical generators");
        return *g;
    }
    if (i >= sets.size())
        throw RangeError("network index " + std::to_string(i) + " out of range");
    return sets[i];
}

std::optional<SetDescription> index_set(const PointSequence& seq, const SetDescription& o)
{
    if (seq.constant)
        return member(o, *seq.constant) ? SetDescription::omega() : SetDescription::empty();
    if (!seq.label.empty() || seq.shift > 0)
        return std::nullopt;
    const std::uint64_t len = seq.prefix.size();
    std::vector<std::uint64_t> early;
    for (std::uint64_t k = 0; k < len; ++k)
        if (member(o, seq.prefix[k]))
            early.push_back(k);
    SetDescription tail = o;
    if (seq.shift < 0) {
        // x_k = k - s past the prefix: k in the set iff xi(k) = k - s lies in O,
        // where xi collapses [0, s] to 0.
        const std::uint64_t s = static_cast<std::uint64_t>(-seq.shift);
        if (len < s)
            throw RangeError("sequence prefix too short for its shift");
        tail = SetDescription::lift(BlockPartition({s + 1}, TailRule{TailRule::Kind::Constant, 1, 2}), o);
    }
    if (len == 0)
        return tail;
    return SetDescription::finite(std::move(early)) | (SetDescription::interval(len, std::nullopt) & tail);
}

// ---------------------------------------------------------------------------

Theorem1Report theorem1_sequence(const INetwork& net, const BlockPartition& p, std::uint64_t horizon,
                                 const FilterSpace& space)
{
    if (p.bounded())
        throw PreconditionError("block sizes must tend to infinity");
    const auto count = net.size();
    if (count && *count == 0)
        throw PreconditionError("network must have at least one set");
    std::vector<SetDescription> sets;
    auto net_set = [&](std::uint64_t i) -> const SetDescription& {
        while (sets.size() <= i) {
            SetDescription s = net.at(sets.size());
            if (!is_infinite(s).is_proved())
                throw PreconditionError("network set " + std::to_string(sets.size()) + " is not certified infinite");
            sets.push_back(std::move(s));
        }
        return sets[i];
    };
    if (count)
        for (std::uint64_t i = 0; i < *count; ++i)
            net_set(i);

    Theorem1Report out;
    out.partition = p;
    const std::uint64_t limit = horizon * 64 + 1024;
    std::vector<bool> used;
    auto is_used = [&used](std::uint64_t x) { return x < used.size() && used[x]; };
    auto take = [&used](std::uint64_t x) {
        if (x >= used.size())
            used.resize(x + 1024, false);
        used[x] = true;
    };
    std::vector<std::uint64_t> cursor;
    std::uint64_t fresh = 0;
    std::vector<std::uint64_t> xs;
    std::uint64_t n = 0;
    for (; n <= p.max_block() && p.end(n) <= horizon; ++n) {
        const std::uint64_t b = p.size(n);
        for (std::uint64_t i = 0; i < b; ++i) {
            if (!count || i < *count) {
                const SetDescription& s = net_set(i);
                if (cursor.size() <= i)
                    cursor.resize(i + 1, 0);
                std::optional<std::uint64_t> y;
                while ((y = next_member(s, cursor[i], limit)) && is_used(*y))
                    cursor[i] = *y + 1;
                if (!y) {
                    out.status = Status::Unknown;
                    out.stuck_block = n;
                    out.reason = "no unused point of N_" + std::to_string(i) + " below " + std::to_string(limit);
                    return out;
                }
                take(*y);
                cursor[i] = *y + 1;
                xs.push_back(*y);
            } else {
                while (is_used(fresh))
                    ++fresh;
                take(fresh);
                xs.push_back(fresh);
            }
        }
    }
    out.blocks = n;
    out.sequence.prefix = std::move(xs);
    out.sequence.label = "theorem1";
    const std::uint64_t rows = count ? std::min<std::uint64_t>(*count, 64) : 64;
    for (std::uint64_t i = 0; i < rows; ++i) {
        std::uint64_t m = 0;
        while (m <= p.max_block() && p.size(m) <= i)
            ++m;
        out.hit_from.push_back(m);
    }
    out.induced = FilterPresentation::induced(out.sequence, space.neighborhoods);
    out.status = n > 0 ? Status::Proved : Status::Unknown;
    out.reason = n > 0 ? "block n meets N_0, ..., N_{|block n|-1}; values are distinct by construction"
                       : "horizon too small for one block";
    return out;
}

bool verify_theorem1(const Theorem1Report& r, const INetwork& net, std::uint64_t max_set)
{
    std::vector<std::uint64_t> xs = r.sequence.prefix;
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
        return false;
    const BlockPartition& p = r.partition;
    if (r.blocks > 0 && p.end(r.blocks - 1) != r.sequence.prefix.size())
        return false;
    const auto count = net.size();
    const std::uint64_t sets = count ? std::min(*count, max_set) : max_set;
    for (std::uint64_t i = 0; i < sets; ++i) {
        const SetDescription s = net.at(i);
        for (std::uint64_t m = 0; m < r.blocks; ++m) {
            if (p.size(m) <= i)
                continue;
            bool hit = false;
            for (std::uint64_t k = p.start(m); k < p.end(m) && !hit; ++k)
                hit = member(s, r.sequence.prefix[k]);
            if (!hit)
                return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

ConvergenceVerdict f_converges(const PointSequence& seq, const FilterPresentation& f, const FilterSpace& space,
                               std::uint64_t budget)
{
    ConvergenceCheck check;
    const FilterNode& node = f.node();
    const bool by_definition = f.kind() == FilterPresentation::Kind::Induced && *node.sequence == seq &&
                               node.sequence->label == seq.label && *node.inner == space.neighborhoods;
    bool any_unknown = false;
    bool any_refuted = false;
    for (std::uint64_t i = 0; i < budget; ++i) {
        const auto o = space.basic(i);
        if (!o)
            break;
        NeighborhoodCheck nc;
        nc.index = i;
        nc.indices = index_set(seq, *o);
        if (by_definition) {
            Certificate c;
            c.method = "induced-definition";
            c.values["neighborhood"] = to_string(*o);
            nc.verdict = FilterVerdict::proved(std::move(c), "index sets of basic neighborhoods generate the filter");
        } else if (!nc.indices) {
            nc.verdict = FilterVerdict::unknown(i, "index set has no closed form");
        } else {
            nc.verdict = filter_member(f, *nc.indices);
        }
        any_unknown |= nc.verdict.is_unknown();
        any_refuted |= nc.verdict.is_refuted();
        check.neighborhoods.push_back(std::move(nc));
    }
    if (check.neighborhoods.empty())
        return ConvergenceVerdict::unknown(budget, "the space exposes no basic neighborhoods");
    if (any_refuted)
        return ConvergenceVerdict::refuted(std::move(check), "some neighborhood's index set is not in the filter");
    if (any_unknown)
        return ConvergenceVerdict::unknown(budget, "some neighborhood could not be decided");
    return ConvergenceVerdict::proved(std::move(check), "every checked neighborhood's index set is in the filter");
}

SubsequenceReport convergent_subsequence(const PointSequence& seq, const FilterSpace& space,
                                         const BlockPartition& witness, std::uint64_t budget)
{
    if (!witness.bounded())
        throw PreconditionError("witness block sizes tend to infinity, so no bounded-size family of blocks exists");
    std::vector<SetDescription> gens;
    for (std::uint64_t j = 0; j < budget; ++j) {
        const auto o = space.basic(j);
        if (!o)
            break;
        auto idx = index_set(seq, *o);
        if (!idx)
            throw PreconditionError("sequence has no closed-form index sets");
        gens.push_back(std::move(*idx));
    }
    SubsequenceReport out;
    out.lemma = lemma1_pseudointersection(BoundedBlockInstance{witness, SetDescription::omega(),
                                                               SetDescription::omega(), gens});
    out.status = out.lemma.status;
    out.reason = out.lemma.reason;
    if (!out.lemma.certificate)
        return out;
    out.indices = out.lemma.certificate->a;
    for (const std::uint64_t k : members_below(*out.indices, kMaxPosition, 32))
        out.prefix.push_back(seq.at(k));
    for (const auto& g : gens) {
        out.almost_inside.push_back(almost_subset(*out.indices, g));
        if (!out.almost_inside.back().is_proved())
            out.status = Status::Unknown;
    }
    out.reason = "D is almost contained in every checked neighborhood's index set";
    return out;
}

// ---------------------------------------------------------------------------

DiagonalRefutation density_diagonal_refuter(const std::vector<SetDescription>& candidates, std::uint64_t max_block)
{
    const BlockPartition p = BlockPartition::dyadic();
    DiagonalRefutation out;
    std::vector<std::uint64_t> removed;
    std::uint64_t next_free = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].universe() != Universe::Omega)
            throw UniverseMismatch("candidates must be subsets of omega");
        bool done = false;
        for (std::uint64_t m = std::max<std::uint64_t>(i, next_free); m <= max_block && !done; ++m) {
            const auto y = next_member(candidates[i], p.start(m), p.end(m));
            if (!y)
                continue;
            removed.push_back(*y);
            out.excluded.push_back({i, m, *y});
            next_free = m + 1;
            done = true;
        }
        if (!done) {
            out.status = Status::Unknown;
            out.reason = "candidate " + std::to_string(i) + " has no point in blocks up to " + std::to_string(max_block);
            return out;
        }
    }
    out.f = SetDescription::block_rule(p, Selector::removed_points(removed));
    out.density = filter_member(FilterPresentation::block_density(p), *out.f);
    out.status = out.density->is_proved() ? Status::Proved : Status::Unknown;
    out.reason = "at most one point removed per dyadic block, so block density tends to 1";
    return out;
}

} // namespace filterlab
